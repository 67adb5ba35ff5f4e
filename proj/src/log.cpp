#include "advopt/log.hpp"

#include <iostream>
#include <mutex>

namespace advopt {

namespace {

std::mutex sink_mutex;

WarningSink& sink() {
    static WarningSink s = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
    return s;
}

}  // namespace

WarningSink set_warning_sink(WarningSink s) {
    std::lock_guard lock(sink_mutex);
    return std::exchange(sink(), std::move(s));
}

void warn(const std::string& message) {
    std::lock_guard lock(sink_mutex);
    if (sink()) sink()(message);
}

}  // namespace advopt
