#pragma once

// Minimal SVG line plot: one polyline over labelled axes. The y axis is
// logarithmic when every value is positive and the range spans a decade.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace awave::cli {

inline std::string line_plot_svg(const std::vector<double>& x, const std::vector<double>& y,
                                 const std::string& x_label, const std::string& y_label) {
    constexpr double W = 640, H = 400, pad = 60;
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (std::isfinite(x[i]) && std::isfinite(y[i])) {
            xs.push_back(x[i]);
            ys.push_back(y[i]);
        }
    }
    const bool log_y = !ys.empty() && *std::min_element(ys.begin(), ys.end()) > 0.0 &&
                       *std::max_element(ys.begin(), ys.end()) > 10.0 * *std::min_element(ys.begin(), ys.end());
    if (log_y) {
        for (auto& v : ys) v = std::log10(v);
    }
    auto span = [](const std::vector<double>& v) {
        if (v.empty()) return std::pair{0.0, 1.0};
        auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *lo == *hi ? std::pair{*lo - 0.5, *hi + 0.5} : std::pair{*lo, *hi};
    };
    const auto [x0, x1] = span(xs);
    const auto [y0, y1] = span(ys);

    std::ostringstream svg;
    char buf[64];
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\"" << H - pad
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
        << "\" stroke=\"black\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double px = pad + (xs[i] - x0) / (x1 - x0) * (W - 2 * pad);
        const double py = H - pad - (ys[i] - y0) / (y1 - y0) * (H - 2 * pad);
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px, py);
        svg << buf;
    }
    svg << "\"/>\n";
    auto label = [&](double px, double py, const std::string& text, const char* anchor) {
        svg << "<text x=\"" << px << "\" y=\"" << py << "\" font-size=\"12\" text-anchor=\"" << anchor << "\">"
            << text << "</text>\n";
    };
    auto tick = [&](double v, bool is_log) {
        std::snprintf(buf, sizeof buf, "%.3g", is_log ? std::pow(10.0, v) : v);
        return std::string(buf);
    };
    label(pad, H - pad + 18, tick(x0, false), "middle");
    label(W - pad, H - pad + 18, tick(x1, false), "middle");
    label(pad - 6, H - pad, tick(y0, log_y), "end");
    label(pad - 6, pad + 4, tick(y1, log_y), "end");
    label(W / 2, H - 15, x_label, "middle");
    label(15, H / 2, y_label + (log_y ? " (log)" : ""), "start");
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace awave::cli
