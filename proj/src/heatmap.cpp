#include "advopt/heatmap.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace advopt {

namespace {

struct Rgb {
    double r, g, b;
};

// Viridis control points.
constexpr std::array<Rgb, 5> kPalette{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};

std::string color_for(double t) {
    if (!std::isfinite(t)) return "#dddddd";
    t = std::clamp(t, 0.0, 1.0) * static_cast<double>(kPalette.size() - 1);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), kPalette.size() - 2);
    const double f = t - static_cast<double>(i);
    const Rgb& a = kPalette[i];
    const Rgb& b = kPalette[i + 1];
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(a.r + (b.r - a.r) * f)),
                  static_cast<int>(std::lround(a.g + (b.g - a.g) * f)),
                  static_cast<int>(std::lround(a.b + (b.b - a.b) * f)));
    return buf;
}

std::string num(double v, int precision = 4) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_heatmap_svg(const HeatmapData& data) {
    const std::size_t rows = data.row_values.size();
    const std::size_t cols = data.column_values.size();
    const double cw = cols ? std::clamp(900.0 / static_cast<double>(cols), 1.0, 28.0) : 28.0;
    const double ch = rows ? std::clamp(600.0 / static_cast<double>(rows), 4.0, 28.0) : 28.0;
    const double left = 70, top = 40, bottom = 60, right = 120;
    const double width = left + cw * static_cast<double>(cols) + right;
    const double height = top + ch * static_cast<double>(rows) + bottom;

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& row : data.values)
        for (double v : row)
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
    const double range = hi > lo ? hi - lo : 1.0;

    // Row 0 (lowest beta) is drawn at the bottom.
    auto x_of = [&](std::size_t c) { return left + cw * static_cast<double>(c); };
    auto y_of = [&](std::size_t r) { return top + ch * static_cast<double>(rows - 1 - r); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width, 6) << "\" height=\"" << num(height, 6)
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << escape(data.title) << "</text>\n";
    os << "<g shape-rendering=\"crispEdges\">\n";
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double v = data.values[r][c];
            os << "<rect x=\"" << num(x_of(c), 7) << "\" y=\"" << num(y_of(r), 7) << "\" width=\"" << num(cw, 7)
               << "\" height=\"" << num(ch, 7) << "\" fill=\"" << color_for((v - lo) / range) << "\"/>\n";
        }
    os << "</g>\n";

    // Zone boundaries where neighboring labels differ.
    os << "<g stroke=\"white\" stroke-width=\"2\">\n";
    auto label = [&](std::size_t r, std::size_t c) {
        return r < data.labels.size() && c < data.labels[r].size() ? data.labels[r][c] : std::nullopt;
    };
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const auto here = label(r, c);
            if (!here) continue;
            if (c + 1 < cols && label(r, c + 1) && label(r, c + 1) != here)
                os << "<line x1=\"" << num(x_of(c + 1), 7) << "\" y1=\"" << num(y_of(r), 7) << "\" x2=\""
                   << num(x_of(c + 1), 7) << "\" y2=\"" << num(y_of(r) + ch, 7) << "\"/>\n";
            if (r + 1 < rows && label(r + 1, c) && label(r + 1, c) != here)
                os << "<line x1=\"" << num(x_of(c), 7) << "\" y1=\"" << num(y_of(r), 7) << "\" x2=\""
                   << num(x_of(c) + cw, 7) << "\" y2=\"" << num(y_of(r), 7) << "\"/>\n";
        }
    os << "</g>\n";

    // Zone letters when cells are large enough to hold them.
    if (cw >= 12 && ch >= 12) {
        os << "<g fill=\"white\" text-anchor=\"middle\" font-size=\"9\">\n";
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                if (auto l = label(r, c))
                    os << "<text x=\"" << num(x_of(c) + cw / 2, 7) << "\" y=\"" << num(y_of(r) + ch / 2 + 3, 7)
                       << "\">" << short_label(*l) << "</text>\n";
        os << "</g>\n";
    }

    const double marker = std::max(2.0, std::min(cw, ch) / 2.5);
    os << "<g fill=\"none\" stroke=\"red\" stroke-width=\"1.5\">\n";
    for (auto [r, c] : data.row_knees)
        os << "<circle cx=\"" << num(x_of(c) + cw / 2, 7) << "\" cy=\"" << num(y_of(r) + ch / 2, 7) << "\" r=\""
           << num(marker, 4) << "\"/>\n";
    os << "</g>\n<g fill=\"none\" stroke=\"orange\" stroke-width=\"1.5\">\n";
    for (auto [r, c] : data.column_knees)
        os << "<rect x=\"" << num(x_of(c) + cw / 2 - marker, 7) << "\" y=\"" << num(y_of(r) + ch / 2 - marker, 7)
           << "\" width=\"" << num(2 * marker, 4) << "\" height=\"" << num(2 * marker, 4) << "\"/>\n";
    os << "</g>\n";

    // Axes: a handful of ticks on each.
    const std::size_t xticks = std::min<std::size_t>(cols, 6), yticks = std::min<std::size_t>(rows, 6);
    const double base_y = top + ch * static_cast<double>(rows);
    for (std::size_t i = 0; i < xticks; ++i) {
        const std::size_t c = xticks > 1 ? i * (cols - 1) / (xticks - 1) : 0;
        os << "<text x=\"" << num(x_of(c) + cw / 2, 7) << "\" y=\"" << num(base_y + 15, 7)
           << "\" text-anchor=\"middle\">" << num(data.column_values[c], 3) << "</text>\n";
    }
    for (std::size_t i = 0; i < yticks; ++i) {
        const std::size_t r = yticks > 1 ? i * (rows - 1) / (yticks - 1) : 0;
        os << "<text x=\"" << num(left - 6, 7) << "\" y=\"" << num(y_of(r) + ch / 2 + 4, 7)
           << "\" text-anchor=\"end\">" << num(data.row_values[r], 3) << "</text>\n";
    }
    os << "<text x=\"" << num(left + cw * static_cast<double>(cols) / 2, 7) << "\" y=\"" << num(base_y + 35, 7)
       << "\" text-anchor=\"middle\">adversary fraction</text>\n";
    os << "<text x=\"15\" y=\"" << num(top + ch * static_cast<double>(rows) / 2, 7)
       << "\" transform=\"rotate(-90 15 " << num(top + ch * static_cast<double>(rows) / 2, 7)
       << ")\" text-anchor=\"middle\">severity (beta)</text>\n";

    // Color bar spans the grid height.
    const double bar_x = left + cw * static_cast<double>(cols) + 20;
    const double bar_h = std::max(ch * static_cast<double>(rows), 50.0);
    const double step = bar_h / 50.0;
    for (int i = 0; i < 50; ++i) {
        const double t = 1.0 - i / 49.0;
        os << "<rect x=\"" << num(bar_x, 7) << "\" y=\"" << num(top + i * step, 7) << "\" width=\"14\" height=\""
           << num(step + 0.5, 7) << "\" fill=\"" << color_for(t) << "\"/>\n";
    }
    if (std::isfinite(lo)) {
        os << "<text x=\"" << num(bar_x + 18, 7) << "\" y=\"" << num(top + 8, 7) << "\">" << num(hi) << "</text>\n";
        os << "<text x=\"" << num(bar_x + 18, 7) << "\" y=\"" << num(top + bar_h, 7) << "\">" << num(lo)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string render_heatmap_csv(const HeatmapData& data) {
    std::ostringstream os;
    os << "beta";
    for (double f : data.column_values) os << ',' << shortest(f);
    os << '\n';
    for (std::size_t r = 0; r < data.row_values.size(); ++r) {
        os << shortest(data.row_values[r]);
        for (double v : data.values[r]) os << ',' << (std::isfinite(v) ? shortest(v) : "");
        os << '\n';
    }
    return os.str();
}

}  // namespace advopt
