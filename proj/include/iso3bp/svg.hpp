// Deterministic standalone SVG emission: F/R time plots, x-y trajectory
// projections, and branch curves in (a,b) or axonometric (T,a,b) projection.
#ifndef ISO3BP_SVG_HPP
#define ISO3BP_SVG_HPP

#include <string>
#include <vector>

#include "iso3bp/branch_io.hpp"
#include "iso3bp/continuation.hpp"
#include "iso3bp/periodic.hpp"

namespace iso3bp {

struct SvgSeries {
    std::string label;
    std::string color; // "#rrggbb"
    std::vector<std::pair<double, double>> points;
};

struct SvgOptions {
    int width = 800;
    int height = 600;
    std::string title;
    std::string x_label;
    std::string y_label;
    bool equal_aspect = false;
};

// generic multi-series line plot (F and R vs t use this)
std::string svg_line_plot(const std::vector<SvgSeries>& series, const SvgOptions& opts);

// F and R of one solution over [0, t_end]
std::string svg_fr_plot(const std::vector<StateSample>& samples, const SvgOptions& opts);

// x-y projection of the three embedded body trajectories
std::string svg_xy_plot(const Trajectory3D& traj, const SvgOptions& opts);

// branch polyline; axonometric (T,a,b) when axonometric=true, else (a,b)
std::string svg_branch_plot(const Branch& branch, bool axonometric, const SvgOptions& opts);

} // namespace iso3bp

#endif
