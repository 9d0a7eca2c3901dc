#include "iso3bp/bifurcation.hpp"

#include <algorithm>
#include <cmath>

#include "iso3bp/errors.hpp"
#include "iso3bp/parallel.hpp"

namespace iso3bp {
namespace {

std::vector<double> cumulative_arc(const Branch& branch) {
    std::vector<double> arc(branch.points.size(), 0.0);
    for (std::size_t i = 1; i < branch.points.size(); ++i)
        arc[i] = arc[i - 1] + norm(branch.points[i].position() - branch.points[i - 1].position());
    return arc;
}

// point on the stored polyline at arc parameter s, plus the local direction
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

// corrector-projected |Z| at arc parameter s along an odd/even branch
struct TrialEval {
    CurvePoint point;
    double z;
};

TrialEval eval_projected(const Branch& branch, const std::vector<double>& arc, double s,
                         const IntegratorConfig& cfg) {
    const PolylineSample ps = sample_polyline(branch, arc, s);
    const CorrectorResult cr =
        newton_correct(ps.y, branch.kind, ps.direction, 1e-10, 30, cfg);
    return {cr.point, z_norm_at(cr.point, cfg)};
}

} // namespace

double z_norm_at(const CurvePoint& pt, const IntegratorConfig& cfg) {
    const Vec3 half_period_coords{2.0 * pt.tau, pt.a, pt.b};
    return norm(tangent_field(half_period_coords, BranchKind::odd, cfg));
}

std::vector<ZProfileEntry> z_profile(const Branch& branch, const IntegratorConfig& cfg,
                                     std::size_t stride, bool serial) {
    if (branch.kind != BranchKind::odd_even)
        throw Error("z_profile expects an odd/even branch");
    if (stride == 0) stride = 1;
    const auto arc = cumulative_arc(branch);

    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < branch.points.size(); i += stride) indices.push_back(i);
    if (indices.empty() || indices.back() != branch.points.size() - 1)
        indices.push_back(branch.points.size() - 1);

    std::vector<ZProfileEntry> profile(indices.size());
    parallel_for_index(indices.size(), [&](std::size_t j) {
        const std::size_t i = indices[j];
        profile[j] = {arc[i], z_norm_at(branch.points[i], cfg), i};
    }, serial);
    return profile;
}

BifurcationReport find_bifurcation(const Branch& s1, const IntegratorConfig& cfg,
                                   double bracket_tol) {
    if (s1.kind != BranchKind::odd_even)
        throw Error("find_bifurcation expects an odd/even branch");
    if (s1.points.size() < 3)
        throw Error("find_bifurcation needs at least 3 branch points");

    const auto arc = cumulative_arc(s1);

    // coarse scan over pillars (all points for small branches)
    std::vector<std::size_t> scan;
    for (std::size_t i = 0; i < s1.points.size(); ++i)
        if (s1.points[i].is_pillar) scan.push_back(i);
    if (scan.size() < 3) {
        scan.clear();
        for (std::size_t i = 0; i < s1.points.size(); ++i) scan.push_back(i);
    }
    if (scan.front() != 0) scan.insert(scan.begin(), 0);
    if (scan.back() != s1.points.size() - 1) scan.push_back(s1.points.size() - 1);

    std::vector<double> z(scan.size());
    parallel_for_index(scan.size(), [&](std::size_t j) {
        z[j] = z_norm_at(s1.points[scan[j]], cfg);
    });

    const std::size_t jmin = static_cast<std::size_t>(
        std::min_element(z.begin(), z.end()) - z.begin());
    if (jmin == 0 || jmin + 1 == scan.size())
        throw NoInteriorMinimum("|Z| scan minimum sits at a branch endpoint");

    BifurcationReport rep;
    rep.bracket_lo = s1.points[scan[jmin - 1]];
    rep.bracket_hi = s1.points[scan[jmin + 1]];

    // golden-section refinement on arc length with corrector re-projection
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = arc[scan[jmin - 1]], hi = arc[scan[jmin + 1]];
    double s1g = hi - gr * (hi - lo);
    double s2g = lo + gr * (hi - lo);
    TrialEval e1 = eval_projected(s1, arc, s1g, cfg);
    TrialEval e2 = eval_projected(s1, arc, s2g, cfg);
    int evals = 2;
    TrialEval best = e1.z <= e2.z ? e1 : e2;
    // keep the discrete minimum as the initial incumbent
    best = std::min({best, TrialEval{s1.points[scan[jmin]], z[jmin]}},
                    [](const TrialEval& a, const TrialEval& b) { return a.z < b.z; });

    while (hi - lo > bracket_tol) {
        if (e1.z < e2.z) {
            hi = s2g;
            s2g = s1g;
            e2 = e1;
            s1g = hi - gr * (hi - lo);
            e1 = eval_projected(s1, arc, s1g, cfg);
            if (e1.z < best.z) best = e1;
        } else {
            lo = s1g;
            s1g = s2g;
            e1 = e2;
            s2g = lo + gr * (hi - lo);
            e2 = eval_projected(s1, arc, s2g, cfg);
            if (e2.z < best.z) best = e2;
        }
        ++evals;
    }

    rep.point = best.point;
    rep.z_norm = best.z;
    rep.bracket_arc = hi - lo;
    rep.evaluations = evals;
    return rep;
}

CurvePoint seed_odd_branch(const BifurcationReport& rep, const IntegratorConfig& cfg,
                           double delta, double eps) {
    const Vec3 b_half{2.0 * rep.point.tau, rep.point.a, rep.point.b};

    // local S1 direction in half-period coordinates, from the refinement bracket
    const Vec3 lo{2.0 * rep.bracket_lo.tau, rep.bracket_lo.a, rep.bracket_lo.b};
    const Vec3 hi{2.0 * rep.bracket_hi.tau, rep.bracket_hi.a, rep.bracket_hi.b};
    const Vec3 t1 = normalized(hi - lo);

    const JacobianEval je = residual_jacobian(b_half, BranchKind::odd, cfg);
    const Vec3 n = normalized(je.jacobian.row0); // grad F; rows are parallel at B
    const Vec3 u = normalized(cross(n, t1));

    for (double d : {delta, -delta, 2.0 * delta, -2.0 * delta, 5.0 * delta, -5.0 * delta}) {
        try {
            const CorrectorResult cr =
                newton_correct(b_half + d * u, BranchKind::odd, u, eps, 30, cfg);
            // reject points that landed back on the S1 image: those satisfy the
            // odd/even system at half their tau
            const ResidualEval oe =
                residual({cr.point.tau / 2.0, cr.point.a, cr.point.b}, BranchKind::odd_even, cfg);
            const double oen = std::max(std::fabs(oe.residual[0]), std::fabs(oe.residual[1]));
            if (oen > 1e-5) return cr.point;
        } catch (const Error&) {
            // try the next offset
        }
    }
    throw Error("seed_odd_branch: no transverse seed converged off the S1 image");
}

} // namespace iso3bp
