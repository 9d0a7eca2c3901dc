#include "iso3bp/continuation.hpp"

#include <cmath>

#include "iso3bp/errors.hpp"

namespace iso3bp {
namespace {

constexpr double kHMin = 1e-6;
constexpr int kCorrectorMaxIter = 25;

double inf2(const std::array<double, 2>& r) {
    return std::max(std::fabs(r[0]), std::fabs(r[1]));
}

Vec3 orient(const Vec3& v, const Vec3& reference) {
    return dot(v, reference) < 0 ? -v : v;
}

} // namespace

std::string to_string(TerminationReason r) {
    switch (r) {
        case TerminationReason::max_pillars: return "max-pillars";
        case TerminationReason::zero_tangent: return "zero-tangent";
        case TerminationReason::collision_proximity: return "collision-proximity";
        case TerminationReason::corrector_failure: return "corrector-failure";
        case TerminationReason::step_failure: return "step-failure";
        case TerminationReason::left_box: return "left-box";
    }
    return "unknown";
}

TerminationReason termination_from_string(const std::string& s) {
    for (auto r : {TerminationReason::max_pillars, TerminationReason::zero_tangent,
                   TerminationReason::collision_proximity, TerminationReason::corrector_failure,
                   TerminationReason::step_failure, TerminationReason::left_box})
        if (to_string(r) == s) return r;
    throw Error("unknown termination reason: " + s);
}

Vec3 tangent_from_jacobian(const Mat2x3& jac) {
    return cross(jac.row0, jac.row1);
}

Vec3 tangent_field(const Vec3& y, BranchKind kind, const IntegratorConfig& cfg) {
    return tangent_from_jacobian(residual_jacobian(y, kind, cfg).jacobian);
}

bool tangent_is_zero(const Mat2x3& jac, double rel_threshold) {
    const double scale = norm(jac.row0) * norm(jac.row1);
    return norm(tangent_from_jacobian(jac)) <= rel_threshold * scale;
}

Vec3 predictor_step(const Vec3& y, const Vec3& unit_tangent, double h) {
    return y + h * unit_tangent;
}

StopCheck stop_policy_evaluate(const CurvePoint& pt, const Mat2x3& jac_at_pt,
                               int pillar_count, const StopPolicy& sp) {
    if (pt.min_r < sp.collision_guard_r)
        return {true, TerminationReason::collision_proximity};
    if (tangent_is_zero(jac_at_pt, sp.zero_tangent_rel))
        return {true, TerminationReason::zero_tangent};
    if (pillar_count > sp.max_pillars)
        return {true, TerminationReason::max_pillars};
    if (!sp.box.contains(pt.position()))
        return {true, TerminationReason::left_box};
    return {};
}

Branch trace_branch(const CurvePoint& seed, BranchKind kind, const ToleranceConfig& tc,
                    const StopPolicy& sp, const IntegratorConfig& cfg) {
    Branch branch;
    branch.kind = kind;
    branch.config = tc;

    // re-verify the seed independently
    const ResidualEval seed_eval = residual(seed.position(), kind, cfg);
    if (inf2(seed_eval.residual) >= tc.eps1)
        throw Error("trace_branch seed does not satisfy eps1");

    CurvePoint pillar{seed.tau, seed.a, seed.b, kind, seed_eval.residual, true,
                      seed_eval.min_r};
    branch.points.push_back(pillar);

    JacobianEval seed_jac = residual_jacobian(seed.position(), kind, cfg);
    if (tangent_is_zero(seed_jac.jacobian, sp.zero_tangent_rel)) {
        branch.termination = TerminationReason::zero_tangent;
        branch.termination_detail = "tangent field vanishes at the seed";
        branch.h_final = tc.h;
        return branch;
    }
    Vec3 dir = normalized(tangent_from_jacobian(seed_jac.jacobian)) * double(tc.orientation);

    {
        const StopCheck sc = stop_policy_evaluate(pillar, seed_jac.jacobian, 1, sp);
        if (sc.stop) {
            branch.termination = sc.reason;
            branch.h_final = tc.h;
            return branch;
        }
    }

    double h = tc.h;
    int k = tc.k;
    int pillar_count = 1;

    auto shrink = [&]() -> bool { // false when nothing left to shrink
        if (h * 0.5 >= kHMin) {
            h *= 0.5;
            return true;
        }
        if (k > 1) {
            k /= 2;
            return true;
        }
        return false;
    };

    for (;;) {
        // one predictor segment from the current pillar
        Vec3 y = branch.points.back().position();
        Vec3 seg_dir = dir;
        std::vector<CurvePoint> qs;
        qs.reserve(k);
        bool segment_failed = false;
        std::string fail_detail;
        StopCheck stop{};

        for (int i = 1; i <= k; ++i) {
            const Vec3 y_next = predictor_step(y, seg_dir, h);
            JacobianEval je;
            try {
                je = residual_jacobian(y_next, kind, cfg);
            } catch (const CollisionError&) {
                segment_failed = true;
                fail_detail = "collision during predictor evaluation";
                break;
            } catch (const StepSizeUnderflow&) {
                segment_failed = true;
                fail_detail = "integrator step underflow during predictor evaluation";
                break;
            }
            if (inf2(je.residual) >= tc.eps2) {
                segment_failed = true;
                fail_detail = "intermediate point violated eps2";
                break;
            }
            CurvePoint q{y_next.x, y_next.y, y_next.z, kind, je.residual, false, je.min_r};
            qs.push_back(q);

            if (tangent_is_zero(je.jacobian, sp.zero_tangent_rel)) {
                stop = {true, TerminationReason::zero_tangent};
                break;
            }
            const Vec3 next_dir = orient(normalized(tangent_from_jacobian(je.jacobian)), seg_dir);

            stop = stop_policy_evaluate(q, je.jacobian, pillar_count, sp);
            if (stop.stop) break;

            y = y_next;
            seg_dir = next_dir;
        }

        if (segment_failed) {
            if (shrink()) continue;
            branch.termination = fail_detail.find("eps2") != std::string::npos
                                     ? TerminationReason::step_failure
                                     : TerminationReason::collision_proximity;
            branch.termination_detail = fail_detail + " (h and k exhausted)";
            break;
        }

        if (stop.stop) {
            // points that passed eps2 are valid intermediates
            for (const auto& q : qs) branch.points.push_back(q);
            branch.termination = stop.reason;
            break;
        }

        // corrector at q_k, constrained transverse to the last predictor direction
        CorrectorResult cr;
        try {
            cr = newton_correct(qs.back().position(), kind, seg_dir, tc.eps1,
                                kCorrectorMaxIter, cfg);
        } catch (const Error& e) {
            if (shrink()) continue;
            branch.termination = TerminationReason::corrector_failure;
            branch.termination_detail = e.what();
            break;
        }
        if (cr.moved > tc.eps3) {
            if (shrink()) continue;
            branch.termination = TerminationReason::corrector_failure;
            branch.termination_detail = "corrected point moved farther than eps3";
            break;
        }

        for (const auto& q : qs) branch.points.push_back(q);
        cr.point.is_pillar = true;
        branch.points.push_back(cr.point);
        ++pillar_count;
        dir = orient(normalized(tangent_from_jacobian(cr.jacobian)), seg_dir);

        const StopCheck sc = stop_policy_evaluate(cr.point, cr.jacobian, pillar_count, sp);
        if (sc.stop) {
            branch.termination = sc.reason;
            break;
        }

        // recover step parameters after a clean segment
        h = std::min(2.0 * h, tc.h);
        k = std::min(2 * k, tc.k);
    }

    branch.h_final = h;
    return branch;
}

} // namespace iso3bp
