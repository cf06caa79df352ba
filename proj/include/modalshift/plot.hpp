#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "modalshift/csv.hpp"

namespace modalshift {
namespace plotdetail {

inline std::string px(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", value);
    return buffer;
}

struct Extent {
    double lo = 0.0;
    double hi = 1.0;

    void include(double value) {
        if (std::isnan(value))
            return;
        if (empty) {
            lo = hi = value;
            empty = false;
        } else {
            lo = std::min(lo, value);
            hi = std::max(hi, value);
        }
    }

    /// Pads the range so points never sit on the frame; degenerate ranges
    /// get a unit of breathing room.
    void finish() {
        if (empty) {
            lo = 0.0;
            hi = 1.0;
        } else if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            const double pad = 0.05 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
    }

    double fraction(double value) const { return (value - lo) / (hi - lo); }

private:
    bool empty = true;
};

inline const std::vector<std::string>& palette() {
    static const std::vector<std::string> colors = {
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
        "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
    };
    return colors;
}

/// One framed panel: axes, four ticks per side, centered titles. Children
/// (marks or series) are drawn by the caller inside the returned group.
inline void open_panel(std::ostringstream& svg, double origin_x, double origin_y,
                       double width, double height, const Extent& x, const Extent& y,
                       const std::string& x_title, const std::string& y_title,
                       const std::string& title) {
    svg << "<g transform=\"translate(" << px(origin_x) << "," << px(origin_y) << ")\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << px(width) << "\" height=\"" << px(height)
        << "\" fill=\"white\" stroke=\"#333\"/>\n";
    svg << "<text x=\"" << px(width / 2) << "\" y=\"-8\" text-anchor=\"middle\" "
           "font-size=\"13\" font-family=\"sans-serif\">"
        << title << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = i / 4.0;
        const double tick_x = fx * width;
        const double value_x = x.lo + fx * (x.hi - x.lo);
        svg << "<line x1=\"" << px(tick_x) << "\" y1=\"" << px(height) << "\" x2=\""
            << px(tick_x) << "\" y2=\"" << px(height + 4) << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"" << px(tick_x) << "\" y=\"" << px(height + 16)
            << "\" text-anchor=\"middle\" font-size=\"10\" font-family=\"sans-serif\">"
            << format_double(value_x) << "</text>\n";
        const double tick_y = height - fx * height;
        const double value_y = y.lo + fx * (y.hi - y.lo);
        svg << "<line x1=\"-4\" y1=\"" << px(tick_y) << "\" x2=\"0\" y2=\"" << px(tick_y)
            << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"-7\" y=\"" << px(tick_y + 3)
            << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">"
            << format_double(value_y) << "</text>\n";
    }
    svg << "<text x=\"" << px(width / 2) << "\" y=\"" << px(height + 32)
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
        << x_title << "</text>\n";
    svg << "<text transform=\"translate(" << px(-44.0) << "," << px(height / 2)
        << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\" "
           "font-family=\"sans-serif\">"
        << y_title << "</text>\n";
}

inline void close_panel(std::ostringstream& svg) { svg << "</g>\n"; }

inline std::size_t column_index(const std::vector<std::string>& header,
                                const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw std::runtime_error("missing column '" + name + "'");
}

} // namespace plotdetail

/// Recognizes which of our two CSV layouts a header belongs to.
inline std::string detect_plot_kind(const std::vector<std::string>& header) {
    for (const std::string& cell : header)
        if (cell == "crowding")
            return "front";
    for (const std::string& cell : header)
        if (cell.size() > 5 && cell.substr(cell.size() - 5) == "_mean")
            return "sweep";
    throw std::runtime_error("unrecognized CSV header; expected a sweep or front file");
}

/// Objective-space scatter of a Pareto front: one circle per row.
inline std::string render_front_svg(const std::vector<std::vector<std::string>>& rows) {
    using namespace plotdetail;
    if (rows.size() < 2)
        throw std::runtime_error("front CSV has no data rows");
    const std::size_t f1_col = column_index(rows[0], "rer_congestion");
    const std::size_t f2_col = column_index(rows[0], "other_congestion");

    std::vector<std::pair<double, double>> points;
    Extent x_extent;
    Extent y_extent;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const double f1 = parse_double(rows[r].at(f1_col));
        const double f2 = parse_double(rows[r].at(f2_col));
        points.emplace_back(f1, f2);
        x_extent.include(f1);
        y_extent.include(f2);
    }
    x_extent.finish();
    y_extent.finish();

    const double width = 420.0;
    const double height = 320.0;
    const double margin_left = 70.0;
    const double margin_top = 30.0;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
        << px(width + margin_left + 20.0) << "\" height=\"" << px(height + margin_top + 50.0)
        << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    open_panel(svg, margin_left, margin_top, width, height, x_extent, y_extent,
               "rer_congestion", "other_congestion", "pareto front");
    for (const auto& [f1, f2] : points) {
        const double cx = x_extent.fraction(f1) * width;
        const double cy = height - y_extent.fraction(f2) * height;
        svg << "<circle cx=\"" << px(cx) << "\" cy=\"" << px(cy)
            << "\" r=\"4\" fill=\"#1f77b4\" fill-opacity=\"0.8\"/>\n";
    }
    close_panel(svg);
    svg << "</svg>\n";
    return svg.str();
}

/// Sweep lines: per (capacity, interval) combination, two panels with
/// indicator means against beta_c, one polyline per beta_tau value.
inline std::string render_sweep_svg(const std::vector<std::vector<std::string>>& rows) {
    using namespace plotdetail;
    if (rows.size() < 2)
        throw std::runtime_error("sweep CSV has no data rows");
    const std::size_t bc_col = column_index(rows[0], "beta_c");
    const std::size_t bt_col = column_index(rows[0], "beta_tau");
    const std::size_t cap_col = column_index(rows[0], "train_capacity");
    const std::size_t int_col = column_index(rows[0], "train_interval");
    const std::vector<std::pair<std::string, std::size_t>> indicators = {
        {"avg_travel_time", column_index(rows[0], "avg_travel_time_mean")},
        {"avg_congestion_other", column_index(rows[0], "avg_congestion_other_mean")},
    };

    struct Point {
        double beta_c;
        double value;
    };
    // facets and series keep first-appearance order, which is grid order
    std::vector<std::string> facet_order;
    std::vector<std::string> series_order;
    std::map<std::string, std::size_t> facet_index;
    std::map<std::string, std::size_t> series_index;

    auto facet_key = [&](const std::vector<std::string>& row) {
        return "C=" + row.at(cap_col) + " I=" + row.at(int_col);
    };
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string facet = facet_key(rows[r]);
        if (!facet_index.count(facet)) {
            facet_index[facet] = facet_order.size();
            facet_order.push_back(facet);
        }
        const std::string& series = rows[r].at(bt_col);
        if (!series_index.count(series)) {
            series_index[series] = series_order.size();
            series_order.push_back(series);
        }
    }
    // facets[f][indicator][series] -> points
    std::vector<std::vector<std::vector<std::vector<Point>>>> data(
        facet_order.size(),
        std::vector<std::vector<std::vector<Point>>>(
            indicators.size(), std::vector<std::vector<Point>>(series_order.size())));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::size_t f = facet_index[facet_key(rows[r])];
        const std::size_t s = series_index[rows[r].at(bt_col)];
        const double beta_c = parse_double(rows[r].at(bc_col));
        for (std::size_t k = 0; k < indicators.size(); ++k)
            data[f][k][s].push_back({beta_c, parse_double(rows[r].at(indicators[k].second))});
    }

    const double panel_w = 320.0;
    const double panel_h = 240.0;
    const double margin_left = 70.0;
    const double margin_top = 40.0;
    const double gap_x = 90.0;
    const double gap_y = 70.0;
    const double legend_w = 110.0;
    const double total_w =
        margin_left + indicators.size() * (panel_w + gap_x) + legend_w;
    const double total_h = margin_top + facet_order.size() * (panel_h + gap_y);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(total_w)
        << "\" height=\"" << px(total_h) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t f = 0; f < facet_order.size(); ++f) {
        for (std::size_t k = 0; k < indicators.size(); ++k) {
            Extent x_extent;
            Extent y_extent;
            for (const std::vector<Point>& series : data[f][k])
                for (const Point& point : series) {
                    x_extent.include(point.beta_c);
                    y_extent.include(point.value);
                }
            x_extent.finish();
            y_extent.finish();

            const double origin_x = margin_left + k * (panel_w + gap_x);
            const double origin_y = margin_top + f * (panel_h + gap_y);
            open_panel(svg, origin_x, origin_y, panel_w, panel_h, x_extent, y_extent,
                       "beta_c", indicators[k].first,
                       indicators[k].first + " (" + facet_order[f] + ")");
            for (std::size_t s = 0; s < series_order.size(); ++s) {
                std::vector<Point> series = data[f][k][s];
                std::sort(series.begin(), series.end(),
                          [](const Point& a, const Point& b) { return a.beta_c < b.beta_c; });
                const std::string& color = palette()[s % palette().size()];
                svg << "<polyline fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"1.5\" points=\"";
                bool first = true;
                for (const Point& point : series) {
                    if (std::isnan(point.value))
                        continue;
                    if (!first)
                        svg << ' ';
                    first = false;
                    svg << px(x_extent.fraction(point.beta_c) * panel_w) << ','
                        << px(panel_h - y_extent.fraction(point.value) * panel_h);
                }
                svg << "\"/>\n";
            }
            close_panel(svg);
        }
        // legend for this facet row, one swatch per beta_tau value
        const double legend_x = margin_left + indicators.size() * (panel_w + gap_x);
        const double legend_y = margin_top + f * (panel_h + gap_y);
        svg << "<text x=\"" << px(legend_x) << "\" y=\"" << px(legend_y)
            << "\" font-size=\"11\" font-family=\"sans-serif\">beta_tau</text>\n";
        for (std::size_t s = 0; s < series_order.size(); ++s) {
            const double y = legend_y + 14.0 + s * 14.0;
            svg << "<rect x=\"" << px(legend_x) << "\" y=\"" << px(y - 8.0)
                << "\" width=\"10\" height=\"10\" fill=\""
                << palette()[s % palette().size()] << "\"/>\n";
            svg << "<text x=\"" << px(legend_x + 14.0) << "\" y=\"" << px(y)
                << "\" font-size=\"10\" font-family=\"sans-serif\">" << series_order[s]
                << "</text>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace modalshift
