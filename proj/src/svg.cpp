#include "iso3bp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "iso3bp/errors.hpp"

namespace iso3bp {
namespace {

constexpr double kMarginLeft = 70, kMarginRight = 20, kMarginTop = 40, kMarginBottom = 50;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Range {
    double lo = 0, hi = 1;
    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    static Range of(const std::vector<SvgSeries>& series, bool y) {
        bool first = true;
        Range r;
        for (const auto& s : series)
            for (const auto& [px, py] : s.points) {
                const double v = y ? py : px;
                if (first) {
                    r.lo = r.hi = v;
                    first = false;
                } else {
                    r.include(v);
                }
            }
        if (r.hi == r.lo) {
            r.lo -= 1;
            r.hi += 1;
        }
        const double pad = 0.05 * (r.hi - r.lo);
        r.lo -= pad;
        r.hi += pad;
        return r;
    }
};

class SvgBuilder {
public:
    SvgBuilder(const SvgOptions& opts) : o(opts) {
        buf += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        buf += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(o.width)
             + "\" height=\"" + std::to_string(o.height) + "\" viewBox=\"0 0 "
             + std::to_string(o.width) + " " + std::to_string(o.height) + "\">\n";
        buf += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    }

    void set_ranges(Range x, Range y, bool equal_aspect) {
        xr = x;
        yr = y;
        if (equal_aspect) {
            const double sx = plot_w() / (xr.hi - xr.lo);
            const double sy = plot_h() / (yr.hi - yr.lo);
            const double s = std::min(sx, sy);
            const double cx = 0.5 * (xr.lo + xr.hi), w = plot_w() / s;
            const double cy = 0.5 * (yr.lo + yr.hi), h = plot_h() / s;
            xr = {cx - w / 2, cx + w / 2};
            yr = {cy - h / 2, cy + h / 2};
        }
    }

    double plot_w() const { return o.width - kMarginLeft - kMarginRight; }
    double plot_h() const { return o.height - kMarginTop - kMarginBottom; }

    double px(double x) const {
        return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w();
    }
    double py(double y) const {
        return o.height - kMarginBottom - (y - yr.lo) / (yr.hi - yr.lo) * plot_h();
    }

    void frame_and_axes() {
        buf += "<rect x=\"" + fmt(kMarginLeft) + "\" y=\"" + fmt(kMarginTop) + "\" width=\""
             + fmt(plot_w()) + "\" height=\"" + fmt(plot_h())
             + "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 5; ++i) {
            const double xv = xr.lo + (xr.hi - xr.lo) * i / 5;
            const double yv = yr.lo + (yr.hi - yr.lo) * i / 5;
            const double gx = px(xv), gy = py(yv);
            line(gx, o.height - kMarginBottom, gx, o.height - kMarginBottom + 5, "black", 1);
            text(gx, o.height - kMarginBottom + 18, fmt(xv), "middle", 11);
            line(kMarginLeft - 5, gy, kMarginLeft, gy, "black", 1);
            text(kMarginLeft - 8, gy + 4, fmt(yv), "end", 11);
        }
        if (!o.title.empty()) text(o.width / 2.0, kMarginTop - 14, o.title, "middle", 14);
        if (!o.x_label.empty())
            text(kMarginLeft + plot_w() / 2, o.height - 12, o.x_label, "middle", 12);
        if (!o.y_label.empty())
            text(16, kMarginTop - 14, o.y_label, "start", 12);
    }

    void line(double x1, double y1, double x2, double y2, const std::string& color, double w) {
        buf += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2)
             + "\" y2=\"" + fmt(y2) + "\" stroke=\"" + color + "\" stroke-width=\"" + fmt(w)
             + "\"/>\n";
    }

    void text(double x, double y, const std::string& s, const char* anchor, int size) {
        buf += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-family=\"sans-serif\""
             + " font-size=\"" + std::to_string(size) + "\" text-anchor=\"" + anchor + "\">"
             + s + "</text>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color) {
        buf += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.2\" points=\"";
        for (const auto& [x, y] : pts) {
            buf += fmt(px(x));
            buf += ',';
            buf += fmt(py(y));
            buf += ' ';
        }
        if (!pts.empty()) buf.pop_back();
        buf += "\"/>\n";
    }

    void circle(double x, double y, double r, const std::string& color) {
        buf += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) + "\" r=\"" + fmt(r)
             + "\" fill=\"" + color + "\"/>\n";
    }

    void legend(const std::vector<SvgSeries>& series) {
        double y = kMarginTop + 16;
        for (const auto& s : series) {
            if (s.label.empty()) continue;
            line(o.width - kMarginRight - 90, y - 4, o.width - kMarginRight - 70, y - 4,
                 s.color, 2);
            text(o.width - kMarginRight - 64, y, s.label, "start", 12);
            y += 16;
        }
    }

    std::string finish() {
        buf += "</svg>\n";
        return std::move(buf);
    }

    const SvgOptions& o;
    Range xr, yr;
    std::string buf;
};

} // namespace

std::string svg_line_plot(const std::vector<SvgSeries>& series, const SvgOptions& opts) {
    if (series.empty()) throw Error("svg_line_plot: no series");
    SvgBuilder b(opts);
    b.set_ranges(Range::of(series, false), Range::of(series, true), opts.equal_aspect);
    b.frame_and_axes();
    for (const auto& s : series) b.polyline(s.points, s.color);
    b.legend(series);
    return b.finish();
}

std::string svg_fr_plot(const std::vector<StateSample>& samples, const SvgOptions& opts) {
    if (samples.empty()) throw Error("svg_fr_plot: no samples");
    SvgSeries f{"F", "#1f77b4", {}}, r{"R", "#d62728", {}};
    for (const auto& s : samples) {
        f.points.emplace_back(s.t, s.x[kF]);
        r.points.emplace_back(s.t, s.x[kR]);
    }
    SvgOptions o = opts;
    if (o.x_label.empty()) o.x_label = "t";
    return svg_line_plot({f, r}, o);
}

std::string svg_xy_plot(const Trajectory3D& traj, const SvgOptions& opts) {
    if (traj.samples.empty()) throw Error("svg_xy_plot: empty trajectory");
    SvgSeries b1{"body 1", "#2ca02c", {}}, b2{"body 2", "#1f77b4", {}},
        b3{"body 3", "#d62728", {}};
    for (const auto& s : traj.samples) {
        b1.points.emplace_back(s.positions.body1.x, s.positions.body1.y);
        b2.points.emplace_back(s.positions.body2.x, s.positions.body2.y);
        b3.points.emplace_back(s.positions.body3.x, s.positions.body3.y);
    }
    SvgOptions o = opts;
    o.equal_aspect = true;
    if (o.x_label.empty()) o.x_label = "x";
    if (o.y_label.empty()) o.y_label = "y";
    return svg_line_plot({b1, b2, b3}, o);
}

std::string svg_branch_plot(const Branch& branch, bool axonometric, const SvgOptions& opts) {
    if (branch.points.empty()) throw Error("svg_branch_plot: empty branch");
    SvgSeries curve{"", "#1f77b4", {}};
    std::vector<std::pair<double, double>> pillars;

    double t_lo = 1e300, t_hi = -1e300;
    for (const auto& pt : branch.points) {
        t_lo = std::min(t_lo, pt.period());
        t_hi = std::max(t_hi, pt.period());
    }
    const double t_span = t_hi > t_lo ? t_hi - t_lo : 1.0;

    for (const auto& pt : branch.points) {
        double u = pt.a, v = pt.b;
        if (axonometric) {
            const double tn = (pt.period() - t_lo) / t_span;
            u += 0.4 * tn;
            v += 0.2 * tn;
        }
        curve.points.emplace_back(u, v);
        if (pt.is_pillar) pillars.emplace_back(u, v);
    }

    SvgBuilder b(opts);
    b.set_ranges(Range::of({curve}, false), Range::of({curve}, true), false);
    b.frame_and_axes();
    b.polyline(curve.points, curve.color);
    for (const auto& [u, v] : pillars) b.circle(u, v, 2.0, "#d62728");
    return b.finish();
}

} // namespace iso3bp
