// Tangent fields X and Z, the normalized Euler predictor, and the pillar-point
// continuation algorithm tracing the solution branches.
#ifndef ISO3BP_CONTINUATION_HPP
#define ISO3BP_CONTINUATION_HPP

#include <string>
#include <vector>

#include "iso3bp/boundary.hpp"
#include "iso3bp/vec3.hpp"

namespace iso3bp {

struct ToleranceConfig {
    double eps1 = 1e-6;  // pillar-point residual tolerance
    double eps2 = 5e-5;  // intermediate-point residual tolerance
    double eps3 = 5e-5;  // allowed corrector displacement from q_k
    double h = 1e-3;     // predictor step length
    int k = 200;         // predictor steps per pillar segment
    int orientation = 1; // initial direction sign along the tangent field
};

struct Box3 {
    Vec3 lo{0.0, -1e3, -1e3};
    Vec3 hi{1e3, 1e3, 1e3};
    bool contains(const Vec3& y) const {
        return y.x >= lo.x && y.x <= hi.x && y.y >= lo.y && y.y <= hi.y && y.z >= lo.z
            && y.z <= hi.z;
    }
};

struct StopPolicy {
    double collision_guard_r = 0.1; // 1e-2 * R(0)
    double zero_tangent_rel = 1e-8; // |X| below this times |row0||row1| is "zero"
    int max_pillars = 400;
    Box3 box;
};

enum class TerminationReason {
    max_pillars,
    zero_tangent,
    collision_proximity,
    corrector_failure,
    step_failure,
    left_box,
};
std::string to_string(TerminationReason r);
TerminationReason termination_from_string(const std::string& s);

struct Branch {
    BranchKind kind = BranchKind::odd_even;
    std::vector<CurvePoint> points;
    ToleranceConfig config;
    TerminationReason termination = TerminationReason::max_pillars;
    std::string termination_detail;
    double h_final = 0; // step length in effect when tracing ended
};

// Cross product of the two residual-gradient rows (X on S1, Z on S2).
Vec3 tangent_from_jacobian(const Mat2x3& jac);
Vec3 tangent_field(const Vec3& y, BranchKind kind, const IntegratorConfig& cfg);
bool tangent_is_zero(const Mat2x3& jac, double rel_threshold);

// One normalized Euler step; direction must already be oriented and unit.
Vec3 predictor_step(const Vec3& y, const Vec3& unit_tangent, double h);

struct StopCheck {
    bool stop = false;
    TerminationReason reason = TerminationReason::max_pillars;
};

StopCheck stop_policy_evaluate(const CurvePoint& pt, const Mat2x3& jac_at_pt,
                               int pillar_count, const StopPolicy& sp);

// Alternates k predictor steps with one corrector call; halves h on tolerance
// violations (and k once h hits 1e-6); never throws on singular approach, the
// returned Branch records why tracing ended.
Branch trace_branch(const CurvePoint& seed, BranchKind kind, const ToleranceConfig& tc,
                    const StopPolicy& sp, const IntegratorConfig& cfg);

} // namespace iso3bp

#endif
