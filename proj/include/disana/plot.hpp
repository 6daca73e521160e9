#ifndef DISANA_PLOT_HPP
#define DISANA_PLOT_HPP

#include <string>
#include <vector>

#include "disana/analytics.hpp"
#include "disana/sentiment.hpp"

namespace disana::plot {

struct PlotSeries {
    std::string name;
    const sentiment::DailySeries* series = nullptr;
};

struct PlotOptions {
    std::string title;
    int width = 1000;
    int height = 360;
};

/// Standalone SVG: one polyline per series, grey vertical lines at phase
/// boundaries, red lines at change points, blue dots at peaks, a legend and
/// a date axis.
std::string render_svg(const std::vector<PlotSeries>& series,
                       const std::vector<analytics::PhaseRow>& phase_rows,
                       const std::vector<analytics::SeriesPoint>& points,
                       const PlotOptions& options = {});

} // namespace disana::plot

#endif
