// Symmetry residuals whose zeros are reduced-periodic solutions, their
// Jacobians from the extended system, and the Newton corrector used by the
// continuation algorithm.
//
// A branch point is written (tau, a, b) in boundary time: tau is a quarter
// period on the odd/even branch S1 and a half period on the odd branch S2.
#ifndef ISO3BP_BOUNDARY_HPP
#define ISO3BP_BOUNDARY_HPP

#include <array>
#include <string>

#include "iso3bp/integrator.hpp"
#include "iso3bp/state.hpp"
#include "iso3bp/vec3.hpp"

namespace iso3bp {

enum class BranchKind {
    odd_even, // S1: dF/dt(tau) = dR/dt(tau) = 0, full period 4*tau
    odd,      // S2: F(tau) = dR/dt(tau) = 0,     full period 2*tau
};

inline int period_multiplier(BranchKind k) { return k == BranchKind::odd_even ? 4 : 2; }
std::string to_string(BranchKind k);
BranchKind branch_kind_from_string(const std::string& s);

struct CurvePoint {
    double tau = 0, a = 0, b = 0;
    BranchKind kind = BranchKind::odd_even;
    std::array<double, 2> residual{};
    bool is_pillar = false;
    double min_r = 0; // min of R over [0, tau] of this point's solution

    Vec3 position() const { return {tau, a, b}; }
    double period() const { return period_multiplier(kind) * tau; }
};

struct ResidualEval {
    std::array<double, 2> residual;
    double min_r;
    ReducedState state; // solution state at tau
};

// One original-system integration to tau.
ResidualEval residual(const Vec3& y, BranchKind kind, const IntegratorConfig& cfg);

struct JacobianEval {
    Mat2x3 jacobian; // rows = gradients of the two residual components over (t,a,b)
    std::array<double, 2> residual;
    double min_r;
    ExtendedState state;
};

// One extended-system integration to tau supplies both rows (and the residual
// for free). Row layout: odd/even -> (grad dF/dt, grad dR/dt); odd -> (grad F,
// grad dR/dt). First entries are time derivatives evaluated through the RHS.
JacobianEval residual_jacobian(const Vec3& y, BranchKind kind, const IntegratorConfig& cfg);

struct CorrectorResult {
    CurvePoint point;
    int iterations = 0;
    double moved = 0;
    Mat2x3 jacobian; // at the corrected point
};

// Newton on residual = 0 restricted to the hyperplane orthogonal to
// `direction` (the local tangent), i.e. the augmented 3x3 system
// [J; direction^T] delta = [-r; 0]. The stored residual is re-verified with
// an independent original-system integration after convergence.
CorrectorResult newton_correct(const Vec3& guess, BranchKind kind, const Vec3& direction,
                               double eps1, int max_iter, const IntegratorConfig& cfg,
                               double condition_limit = 1e12);

// One-variable restriction: Gauss-Newton in tau with (a, b) held fixed.
// Needs only original-system integrations.
struct TauSolveResult {
    double tau;
    std::array<double, 2> residual;
    int iterations;
};
TauSolveResult solve_tau(double tau0, double a, double b, BranchKind kind,
                         const IntegratorConfig& cfg, int max_iter = 30);

// Two-variable restriction: Newton in (tau, b) with a held fixed.
struct TauBSolveResult {
    double tau, b;
    std::array<double, 2> residual;
    int iterations;
};
TauBSolveResult solve_tau_b(double tau0, double a, double b0, BranchKind kind,
                            const IntegratorConfig& cfg, double tol = 1e-12,
                            int max_iter = 80);

} // namespace iso3bp

#endif
