#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "footrule/csv.hpp"

namespace footrule {

struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

/// Minimal static polyline chart: axes, tick labels, one polyline per
/// series, a small legend. No dependencies, fixed 720x480 canvas.
inline void write_polyline_chart(std::ostream& out, const std::vector<ChartSeries>& series,
                                 const std::string& title, const std::string& x_label,
                                 const std::string& y_label) {
    const double width = 720, height = 480;
    const double left = 70, right = 26, top = 40, bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    bool first = true;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (first) {
                x_min = x_max = x;
                y_min = y_max = y;
                first = false;
            }
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    if (x_max == x_min) x_max = x_min + 1;
    if (y_max == y_min) y_max = y_min + 1;
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return top + (y_max - y) / (y_max - y_min) * plot_h; };
    auto num = [](double v) { return format_double(v, 5); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2"};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
        << "font-family=\"sans-serif\">" << title << "</text>\n";

    // Frame and ticks.
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = x_min + (x_max - x_min) * i / ticks;
        const double fy = y_min + (y_max - y_min) * i / ticks;
        out << "<line x1=\"" << px(fx) << "\" y1=\"" << top + plot_h << "\" x2=\"" << px(fx)
            << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << px(fx) << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << num(fx)
            << "</text>\n";
        out << "<line x1=\"" << left - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << left
            << "\" y2=\"" << py(fy) << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << num(fy)
            << "</text>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << x_label
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << top + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 16 " << top + plot_h / 2 << ")\">" << y_label << "</text>\n";

    // Zero line when visible.
    if (y_min < 0.0 && y_max > 0.0)
        out << "<line x1=\"" << left << "\" y1=\"" << py(0.0) << "\" x2=\"" << left + plot_w
            << "\" y2=\"" << py(0.0) << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = palette[s % (sizeof(palette) / sizeof(palette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (auto [x, y] : series[s].points) out << px(x) << ',' << py(y) << ' ';
        out << "\"/>\n";
        const double ly = top + 14 + 16 * static_cast<double>(s);
        out << "<line x1=\"" << left + plot_w - 130 << "\" y1=\"" << ly << "\" x2=\""
            << left + plot_w - 110 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << left + plot_w - 104 << "\" y=\"" << ly + 4
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << series[s].label
            << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace footrule
