// plot.hpp — minimal deterministic SVG output for sweep results
// (log-scale error vs axis value, one series per variant)
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "msgate/sweep.hpp"

namespace msgate {

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

inline const char* series_color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
    return palette[i % 6];
}

}  // namespace detail

inline void emit_plot(const SweepResult& result, std::ostream& os,
                      const std::string& x_label = "axis",
                      const std::string& y_label = "bell error") {
    if (result.rows.empty())
        throw std::invalid_argument("emit_plot: empty sweep result");

    std::vector<std::string> variants;
    for (const auto& r : result.rows)
        if (std::find(variants.begin(), variants.end(), r.variant) ==
            variants.end())
            variants.push_back(r.variant);

    constexpr double floor_error = 1e-16;
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    bool any_point = false;
    for (const auto& r : result.rows) {
        if (std::isnan(r.observable)) continue;
        any_point = true;
        const double y = std::log10(std::max(r.observable, floor_error));
        x_min = std::min(x_min, r.axis_value);
        x_max = std::max(x_max, r.axis_value);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
    }
    if (!any_point)
        throw std::invalid_argument("emit_plot: no finite observable values");
    if (x_max - x_min < 1e-30) {
        x_min -= 1.0;
        x_max += 1.0;
    }
    y_min = std::floor(y_min);
    y_max = std::ceil(std::max(y_max, y_min + 1.0));

    constexpr double width = 640, height = 420;
    constexpr double ml = 70, mr = 160, mt = 20, mb = 50;
    auto px = [&](double x) {
        return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr);
    };
    auto py = [&](double y_log) {
        return height - mb -
               (y_log - y_min) / (y_max - y_min) * (height - mt - mb);
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
          "height=\"420\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
    os << "<rect x=\"" << detail::fmt(ml) << "\" y=\"" << detail::fmt(mt)
       << "\" width=\"" << detail::fmt(width - ml - mr) << "\" height=\""
       << detail::fmt(height - mt - mb)
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    // decade grid lines and labels
    for (double dec = y_min; dec <= y_max + 1e-9; dec += 1.0) {
        const double y = py(dec);
        os << "<line x1=\"" << detail::fmt(ml) << "\" y1=\"" << detail::fmt(y)
           << "\" x2=\"" << detail::fmt(width - mr) << "\" y2=\""
           << detail::fmt(y) << "\" stroke=\"#dddddd\"/>\n";
        char lbl[32];
        std::snprintf(lbl, sizeof lbl, "1e%d", int(dec));
        os << "<text x=\"" << detail::fmt(ml - 6) << "\" y=\""
           << detail::fmt(y + 4) << "\" text-anchor=\"end\">" << lbl
           << "</text>\n";
    }
    // x ticks at min, mid, max
    for (double x : {x_min, 0.5 * (x_min + x_max), x_max}) {
        char lbl[40];
        std::snprintf(lbl, sizeof lbl, "%.4g", x);
        os << "<text x=\"" << detail::fmt(px(x)) << "\" y=\""
           << detail::fmt(height - mb + 18) << "\" text-anchor=\"middle\">"
           << lbl << "</text>\n";
    }
    os << "<text x=\"" << detail::fmt(0.5 * (ml + width - mr)) << "\" y=\""
       << detail::fmt(height - 8) << "\" text-anchor=\"middle\">" << x_label
       << "</text>\n";
    os << "<text x=\"16\" y=\"" << detail::fmt(0.5 * (mt + height - mb))
       << "\" transform=\"rotate(-90 16 " << detail::fmt(0.5 * (mt + height - mb))
       << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";

    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        const auto& name = variants[vi];
        std::ostringstream path;
        bool in_run = false;
        std::vector<std::pair<double, double>> markers;
        for (const auto& r : result.rows) {
            if (r.variant != name) continue;
            if (std::isnan(r.observable)) {
                in_run = false;  // gap
                continue;
            }
            const double x = px(r.axis_value);
            const double y =
                py(std::log10(std::max(r.observable, floor_error)));
            path << (in_run ? " L " : " M ") << detail::fmt(x) << " "
                 << detail::fmt(y);
            in_run = true;
            markers.emplace_back(x, y);
        }
        os << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\""
           << detail::series_color(vi) << "\" stroke-width=\"1.5\"/>\n";
        for (const auto& [x, y] : markers)
            os << "<circle cx=\"" << detail::fmt(x) << "\" cy=\""
               << detail::fmt(y) << "\" r=\"2.5\" fill=\""
               << detail::series_color(vi) << "\"/>\n";
        // legend
        const double ly = mt + 14 + 16.0 * vi;
        os << "<line x1=\"" << detail::fmt(width - mr + 10) << "\" y1=\""
           << detail::fmt(ly) << "\" x2=\"" << detail::fmt(width - mr + 30)
           << "\" y2=\"" << detail::fmt(ly) << "\" stroke=\""
           << detail::series_color(vi) << "\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << detail::fmt(width - mr + 36) << "\" y=\""
           << detail::fmt(ly + 4) << "\">" << name << "</text>\n";
    }
    os << "</svg>\n";
}

inline std::string emit_plot(const SweepResult& result,
                             const std::string& x_label = "axis",
                             const std::string& y_label = "bell error") {
    std::ostringstream ss;
    emit_plot(result, ss, x_label, y_label);
    return ss.str();
}

}  // namespace msgate
