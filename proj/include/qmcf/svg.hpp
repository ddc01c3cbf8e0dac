#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qmcf {

// Minimal static SVG 1.1 line plots; enough for the decay and dilation
// studies (log-log axes, reference curve), no external plotting dependency.
struct PlotSeries {
    std::string label;
    std::string color = "#1f5fa8";
    bool dashed = false;
    std::vector<std::pair<double, double>> points;
};

struct LinePlot {
    std::string title;
    std::string x_label, y_label;
    bool log_x = false, log_y = false;
    std::vector<PlotSeries> series;

    void write_svg(const std::string& path, int width = 640, int height = 440) const;
};

}  // namespace qmcf
