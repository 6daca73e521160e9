#include "disana/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "disana/errors.hpp"

namespace disana::plot {

namespace {

const char* kPalette[] = {"#1f77b4", "#2ca02c", "#d62728", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

std::string render_svg(const std::vector<PlotSeries>& series,
                       const std::vector<analytics::PhaseRow>& phase_rows,
                       const std::vector<analytics::SeriesPoint>& points,
                       const PlotOptions& options) {
    if (series.empty() || !series.front().series || series.front().series->size() == 0) {
        throw ValidationError("plot needs at least one nonempty series");
    }

    Date begin = series.front().series->begin;
    Date end = series.front().series->date_at(series.front().series->size() - 1);
    double vmin = 0.0, vmax = 1.0;
    bool first = true;
    for (const auto& s : series) {
        if (!s.series || s.series->size() == 0) throw ValidationError("empty series in plot");
        begin = std::min(begin, s.series->begin);
        end = std::max(end, s.series->date_at(s.series->size() - 1));
        for (double v : s.series->values) {
            if (first) {
                vmin = vmax = v;
                first = false;
            } else {
                vmin = std::min(vmin, v);
                vmax = std::max(vmax, v);
            }
        }
    }
    if (vmax <= vmin) vmax = vmin + 1.0;
    vmin = std::min(vmin, 0.0);

    const double W = options.width, H = options.height;
    const double left = 64, right = 16, top = options.title.empty() ? 16 : 36;
    const double bottom = 42;
    const double plot_w = W - left - right;
    const double plot_h = H - top - bottom;
    const double span_days = std::max(1, end.days - begin.days);

    const auto x_of = [&](Date d) {
        return left + (d.days - begin.days) / span_days * plot_w;
    };
    const auto y_of = [&](double v) { return top + (vmax - v) / (vmax - vmin) * plot_h; };

    std::string svg;
    svg += "<svg xmlns='http://www.w3.org/2000/svg' width='" + num(W) + "' height='" + num(H) +
           "' viewBox='0 0 " + num(W) + " " + num(H) + "'>\n";
    svg += "<rect x='0' y='0' width='" + num(W) + "' height='" + num(H) + "' fill='white'/>\n";
    if (!options.title.empty()) {
        svg += "<text x='" + num(W / 2) + "' y='20' text-anchor='middle' font-size='14' "
               "font-family='sans-serif'>" + options.title + "</text>\n";
    }

    // phase boundaries
    for (const auto& row : phase_rows) {
        if (row.begin < begin || end < row.begin) continue;
        const double x = x_of(row.begin);
        svg += "<line x1='" + num(x) + "' y1='" + num(top) + "' x2='" + num(x) + "' y2='" +
               num(top + plot_h) + "' stroke='grey' stroke-width='1' stroke-dasharray='4,3'/>\n";
        svg += "<text x='" + num(x + 2) + "' y='" + num(top + 10) +
               "' font-size='9' fill='grey' font-family='sans-serif'>" + row.name + "</text>\n";
    }

    // change points
    for (const auto& p : points) {
        if (p.kind != analytics::PointKind::changepoint) continue;
        if (p.date < begin || end < p.date) continue;
        const double x = x_of(p.date);
        svg += "<line x1='" + num(x) + "' y1='" + num(top) + "' x2='" + num(x) + "' y2='" +
               num(top + plot_h) + "' stroke='red' stroke-width='1'/>\n";
    }

    // axes
    svg += "<line x1='" + num(left) + "' y1='" + num(top) + "' x2='" + num(left) + "' y2='" +
           num(top + plot_h) + "' stroke='black'/>\n";
    svg += "<line x1='" + num(left) + "' y1='" + num(top + plot_h) + "' x2='" + num(left + plot_w) +
           "' y2='" + num(top + plot_h) + "' stroke='black'/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = vmin + (vmax - vmin) * i / 4.0;
        const double y = y_of(v);
        svg += "<text x='" + num(left - 6) + "' y='" + num(y + 3) +
               "' text-anchor='end' font-size='10' font-family='sans-serif'>" + num(v) +
               "</text>\n";
    }
    const int n_ticks = std::min<int>(6, static_cast<int>(span_days));
    for (int i = 0; i <= n_ticks; ++i) {
        const Date d{static_cast<std::int32_t>(begin.days + span_days * i / n_ticks)};
        const double x = x_of(d);
        svg += "<line x1='" + num(x) + "' y1='" + num(top + plot_h) + "' x2='" + num(x) + "' y2='" +
               num(top + plot_h + 4) + "' stroke='black'/>\n";
        svg += "<text x='" + num(x) + "' y='" + num(top + plot_h + 16) +
               "' text-anchor='middle' font-size='10' font-family='sans-serif'>" +
               format_date(d) + "</text>\n";
    }

    // series polylines
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = *series[si].series;
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string pts;
        for (std::size_t i = 0; i < s.size(); ++i) {
            pts += num(x_of(s.date_at(i))) + "," + num(y_of(s.values[i])) + " ";
        }
        svg += "<polyline fill='none' stroke='";
        svg += color;
        svg += "' stroke-width='1.5' points='" + pts + "'/>\n";
    }

    // peaks
    for (const auto& p : points) {
        if (p.kind != analytics::PointKind::peak) continue;
        if (p.date < begin || end < p.date) continue;
        svg += "<circle cx='" + num(x_of(p.date)) + "' cy='" + num(y_of(p.value)) +
               "' r='3.5' fill='blue'/>\n";
    }

    // legend
    for (std::size_t si = 0; si < series.size(); ++si) {
        const double y = top + 14 + 14 * static_cast<double>(si);
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg += "<line x1='" + num(left + plot_w - 130) + "' y1='" + num(y) + "' x2='" +
               num(left + plot_w - 110) + "' y2='" + num(y) + "' stroke='";
        svg += color;
        svg += "' stroke-width='2'/>\n";
        svg += "<text x='" + num(left + plot_w - 105) + "' y='" + num(y + 3) +
               "' font-size='10' font-family='sans-serif'>" + series[si].name + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

} // namespace disana::plot
