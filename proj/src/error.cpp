#include "advopt/error.hpp"

namespace advopt {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidSize: return "invalid-size";
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::Range: return "range";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::DimensionMismatch: return "dimension-mismatch";
        case ErrorKind::NoData: return "no-data";
        case ErrorKind::Configuration: return "configuration";
        case ErrorKind::DegenerateInput: return "degenerate-input";
        case ErrorKind::InvalidThreshold: return "invalid-threshold";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace advopt
