#include "iso3bp/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "iso3bp/errors.hpp"
#include "iso3bp/parallel.hpp"

namespace iso3bp {
namespace {

// table regression thresholds
constexpr double kPeriodTol = 1e-3;
constexpr double kThetaTol = 1e-3;
constexpr double kClosureTol = 1e-4;
constexpr double kQuarterPass = 1e-6; // odd/even rows must stay below
constexpr double kQuarterFail = 1e-3; // odd rows must exceed
constexpr double kOriginTol = 1e-6;

std::vector<double> cumulative_arc(const Branch& branch) {
    std::vector<double> arc(branch.points.size(), 0.0);
    for (std::size_t i = 1; i < branch.points.size(); ++i)
        arc[i] = arc[i - 1] + norm(branch.points[i].position() - branch.points[i - 1].position());
    return arc;
}

struct PolylineSample {
    Vec3 y;
    Vec3 direction;
};

PolylineSample sample_polyline(const Branch& branch, const std::vector<double>& arc, double s) {
    const auto& pts = branch.points;
    s = std::clamp(s, arc.front(), arc.back());
    std::size_t lo = 0, hi = arc.size() - 1;
    while (hi - lo > 1) {
        const std::size_t m = (lo + hi) / 2;
        if (arc[m] <= s) lo = m; else hi = m;
    }
    const double seg = arc[hi] - arc[lo];
    const double w = seg > 0 ? (s - arc[lo]) / seg : 0.0;
    const Vec3 a = pts[lo].position(), b = pts[hi].position();
    return {a + w * (b - a), normalized(b - a)};
}

Vec3 rotate_z(const Vec3& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {v.x * c - v.y * s, v.x * s + v.y * c, v.z};
}

double config_distance(const BodyPositions& pa, const BodyVelocities& va,
                       const BodyPositions& pb, const BodyVelocities& vb) {
    double m = 0;
    const Vec3 diffs[6] = {pa.body1 - pb.body1, pa.body2 - pb.body2, pa.body3 - pb.body3,
                           va.body1 - vb.body1, va.body2 - vb.body2, va.body3 - vb.body3};
    for (const Vec3& d : diffs) m = std::max(m, norm_inf(d));
    return m;
}

} // namespace

double theta_at_period(const CurvePoint& pt, const IntegratorConfig& cfg) {
    const Parameters p{pt.a, pt.b};
    return integrate_to(initial_reduced(p), p, pt.period(), cfg).theta();
}

PeriodicRecord locate_rational_theta(const Branch& branch, int p, int q,
                                     const IntegratorConfig& cfg, const double* t_hint,
                                     double tol) {
    if (q <= 0) throw Error("locate_rational_theta: q must be positive");
    const double target = p * std::numbers::pi / q;
    const auto arc = cumulative_arc(branch);

    std::vector<std::size_t> scan;
    for (std::size_t i = 0; i < branch.points.size(); ++i)
        if (branch.points[i].is_pillar) scan.push_back(i);
    if (scan.size() < 2) {
        scan.clear();
        for (std::size_t i = 0; i < branch.points.size(); ++i) scan.push_back(i);
    }

    std::vector<double> theta(scan.size());
    parallel_for_index(scan.size(), [&](std::size_t j) {
        theta[j] = theta_at_period(branch.points[scan[j]], cfg);
    });

    // collect brackets where Theta - target changes sign
    struct Bracket {
        double s_lo, s_hi, g_lo, g_hi, mid_period;
    };
    std::vector<Bracket> brackets;
    for (std::size_t j = 0; j + 1 < scan.size(); ++j) {
        const double g0 = theta[j] - target, g1 = theta[j + 1] - target;
        if (g0 == 0.0 || g0 * g1 < 0) {
            const double mid_t = 0.5 * (branch.points[scan[j]].period()
                                      + branch.points[scan[j + 1]].period());
            brackets.push_back({arc[scan[j]], arc[scan[j + 1]], g0, g1, mid_t});
        }
    }
    if (brackets.empty())
        throw TargetOutOfRange("no bracket for Theta target along the branch");

    std::size_t pick = 0;
    if (t_hint) {
        double best = 1e300;
        for (std::size_t i = 0; i < brackets.size(); ++i) {
            const double d = std::fabs(brackets[i].mid_period - *t_hint);
            if (d < best) {
                best = d;
                pick = i;
            }
        }
    }

    double s_lo = brackets[pick].s_lo, s_hi = brackets[pick].s_hi;
    double g_lo = brackets[pick].g_lo, g_hi = brackets[pick].g_hi;

    auto eval = [&](double s) {
        const PolylineSample ps = sample_polyline(branch, arc, s);
        const CorrectorResult cr = newton_correct(ps.y, branch.kind, ps.direction, 1e-10, 30, cfg);
        return std::pair<CurvePoint, double>{cr.point, theta_at_period(cr.point, cfg)};
    };

    CurvePoint best_pt{};
    double best_theta = 0;
    for (int iter = 0; iter < 80; ++iter) {
        double s_try = (g_hi != g_lo) ? s_lo - g_lo * (s_hi - s_lo) / (g_hi - g_lo)
                                      : 0.5 * (s_lo + s_hi);
        // secant step outside (or hugging) the bracket falls back to bisection
        const double width = s_hi - s_lo;
        if (!(s_try > s_lo + 1e-14 * width) || !(s_try < s_hi - 1e-14 * width))
            s_try = 0.5 * (s_lo + s_hi);
        auto [pt, th] = eval(s_try);
        best_pt = pt;
        best_theta = th;
        const double g = th - target;
        if (std::fabs(g) < tol) {
            PeriodicRecord rec;
            rec.T = pt.period();
            rec.a = pt.a;
            rec.b = pt.b;
            rec.theta = th;
            rec.p = p;
            rec.q = q;
            rec.kind = branch.kind;
            return rec;
        }
        if (g * g_lo > 0) {
            s_lo = s_try;
            g_lo = g;
        } else {
            s_hi = s_try;
            g_hi = g;
        }
    }
    throw NoConvergence("locate_rational_theta: secant refinement did not reach tolerance");
}

double closure_check(const PeriodicRecord& rec, const IntegratorConfig& cfg) {
    const Parameters p{rec.a, rec.b};
    const ReducedState start = initial_reduced(p);
    const ReducedState end = integrate_to(start, p, rec.T, cfg);

    const BodyPositions pos0 = embed_positions(start);
    const BodyVelocities vel0 = embed_velocities(start, p);
    const BodyPositions pos1 = embed_positions(end);
    const BodyVelocities vel1 = embed_velocities(end, p);

    const double back = -rec.theta;
    const BodyPositions pos1r{rotate_z(pos1.body1, back), rotate_z(pos1.body2, back),
                              rotate_z(pos1.body3, back)};
    const BodyVelocities vel1r{rotate_z(vel1.body1, back), rotate_z(vel1.body2, back),
                               rotate_z(vel1.body3, back)};
    return config_distance(pos0, vel0, pos1r, vel1r);
}

SymmetryReport symmetry_check(const CurvePoint& pt, const IntegratorConfig& cfg, int grid) {
    const Parameters p{pt.a, pt.b};
    const double T = pt.period();
    const double quarter = T / 4.0;

    DenseOutput<5> fwd, back;
    integrate_to(initial_reduced(p), p, T / 2.0, cfg, &fwd);
    integrate_to(initial_reduced(p), p, -quarter, cfg, &back);

    SymmetryReport rep;
    for (int i = 1; i <= grid; ++i) {
        const double s = quarter * i / grid;
        const auto xs = fwd.eval(s);
        const auto xm = back.eval(-s);
        rep.origin_f = std::max(rep.origin_f, std::fabs(xm[kF] + xs[kF]));
        rep.origin_r = std::max(rep.origin_r, std::fabs(xm[kR] - xs[kR]));
        const auto xq_plus = fwd.eval(quarter + s);
        const auto xq_minus = fwd.eval(quarter - s);
        rep.quarter_f = std::max(rep.quarter_f, std::fabs(xq_plus[kF] - xq_minus[kF]));
        rep.quarter_r = std::max(rep.quarter_r, std::fabs(xq_plus[kR] - xq_minus[kR]));
    }
    return rep;
}

Trajectory3D full_trajectory(const PeriodicRecord& rec, int n_periods,
                             int samples_per_period, const IntegratorConfig& cfg) {
    if (n_periods < 1 || samples_per_period < 2)
        throw Error("full_trajectory: need n_periods >= 1 and samples_per_period >= 2");
    const Parameters p{rec.a, rec.b};
    const double t_end = n_periods * rec.T;

    DenseOutput<5> dense;
    integrate_to(initial_reduced(p), p, t_end, cfg, &dense);

    Trajectory3D out;
    const int total = n_periods * samples_per_period;
    out.samples.reserve(total + 1);
    for (int j = 0; j <= total; ++j) {
        const double t = t_end * j / total;
        ReducedState s;
        s.t = t;
        s.x = dense.eval(t);
        out.samples.push_back({t, s, embed_positions(s)});
    }
    return out;
}

TableRowCheck verify_table_row(const fixtures::TableRow& row, const IntegratorConfig& cfg) {
    TableRowCheck chk;
    chk.row = row;
    const int mult = period_multiplier(row.kind);

    const TauSolveResult ts = solve_tau(row.T / mult, row.a, row.b, row.kind, cfg);
    chk.tau_resolved = ts.tau;
    chk.period_resolved = mult * ts.tau;
    chk.period_ok = std::fabs(chk.period_resolved - row.T) < kPeriodTol;

    CurvePoint pt{ts.tau, row.a, row.b, row.kind, ts.residual, false, 0.0};
    chk.theta = theta_at_period(pt, cfg);
    const double target = row.p * std::numbers::pi / row.q;
    chk.theta_ok = std::fabs(chk.theta - target) < kThetaTol;

    PeriodicRecord rec{chk.period_resolved, row.a, row.b, chk.theta, row.p, row.q, row.kind};
    chk.closure_error = closure_check(rec, cfg);
    chk.closure_ok = chk.closure_error < kClosureTol;

    const SymmetryReport sym = symmetry_check(pt, cfg);
    chk.quarter_defect = sym.quarter_defect();
    chk.origin_defect = sym.origin_defect();
    const bool origin_ok = chk.origin_defect < kOriginTol;
    if (row.kind == BranchKind::odd_even)
        chk.symmetry_ok = origin_ok && chk.quarter_defect < kQuarterPass;
    else
        chk.symmetry_ok = origin_ok && chk.quarter_defect >= kQuarterFail;

    if (!chk.period_ok) chk.failure += "period ";
    if (!chk.theta_ok) chk.failure += "theta ";
    if (!chk.closure_ok) chk.failure += "closure ";
    if (!chk.symmetry_ok) chk.failure += "symmetry ";
    return chk;
}

std::vector<TableRowCheck> verify_all_rows(const IntegratorConfig& cfg, bool serial) {
    const auto rows = fixtures::table_rows();
    std::vector<TableRowCheck> out(rows.size());
    parallel_for_index(rows.size(), [&](std::size_t i) {
        out[i] = verify_table_row(rows[i], cfg);
    }, serial);
    return out;
}

} // namespace iso3bp
