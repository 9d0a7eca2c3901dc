#include "iso3bp/boundary.hpp"

#include <cmath>

#include "iso3bp/errors.hpp"

namespace iso3bp {
namespace {

std::array<double, 2> pick_residual(const std::array<double, 5>& x, BranchKind kind) {
    if (kind == BranchKind::odd_even) return {x[kFdot], x[kRdot]};
    return {x[kF], x[kRdot]};
}

double inf2(const std::array<double, 2>& r) {
    return std::max(std::fabs(r[0]), std::fabs(r[1]));
}

// Solves the augmented system [rows; direction] delta = (-r0, -r1, 0) by
// Gaussian elimination with partial pivoting; estimates cond_1 from the
// explicit inverse.
Vec3 solve_augmented(const Mat2x3& jac, const Vec3& direction,
                     const std::array<double, 2>& res, double condition_limit) {
    double m[3][3] = {
        {jac.row0.x, jac.row0.y, jac.row0.z},
        {jac.row1.x, jac.row1.y, jac.row1.z},
        {direction.x, direction.y, direction.z},
    };

    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                     - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                     + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (det == 0.0 || !std::isfinite(det))
        throw SingularJacobian("augmented corrector system is singular");

    // adjugate / det
    double inv[3][3];
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;

    double norm_a = 0, norm_inv = 0;
    for (int j = 0; j < 3; ++j) {
        double ca = 0, ci = 0;
        for (int i = 0; i < 3; ++i) {
            ca += std::fabs(m[i][j]);
            ci += std::fabs(inv[i][j]);
        }
        norm_a = std::max(norm_a, ca);
        norm_inv = std::max(norm_inv, ci);
    }
    if (norm_a * norm_inv > condition_limit)
        throw SingularJacobian("augmented corrector system condition number above limit");

    const double rhs[3] = {-res[0], -res[1], 0.0};
    Vec3 delta;
    for (int i = 0; i < 3; ++i)
        delta[i] = inv[i][0] * rhs[0] + inv[i][1] * rhs[1] + inv[i][2] * rhs[2];
    return delta;
}

} // namespace

std::string to_string(BranchKind k) {
    return k == BranchKind::odd_even ? "odd-even" : "odd";
}

BranchKind branch_kind_from_string(const std::string& s) {
    if (s == "odd-even" || s == "odd_even" || s == "s1") return BranchKind::odd_even;
    if (s == "odd" || s == "s2") return BranchKind::odd;
    throw Error("unknown branch kind: " + s);
}

ResidualEval residual(const Vec3& y, BranchKind kind, const IntegratorConfig& cfg) {
    if (!(y.x > 0)) throw Error("residual requires tau > 0");
    Parameters p{y.y, y.z};
    double min_r = 0;
    const ReducedState end = integrate_to(initial_reduced(p), p, y.x, cfg, nullptr, &min_r);
    return {pick_residual(end.x, kind), min_r, end};
}

JacobianEval residual_jacobian(const Vec3& y, BranchKind kind, const IntegratorConfig& cfg) {
    if (!(y.x > 0)) throw Error("residual_jacobian requires tau > 0");
    Parameters p{y.y, y.z};
    double min_r = 0;
    const ExtendedState end = integrate_to(initial_extended(p), p, y.x, cfg, nullptr, &min_r);
    const auto rhs = rhs_original(project(end), p, cfg.collision_floor);

    const Vec3 grad_fdot{rhs[kFdot], end.x[kSensA + kFdot], end.x[kSensB + kFdot]};
    const Vec3 grad_rdot{rhs[kRdot], end.x[kSensA + kRdot], end.x[kSensB + kRdot]};
    const Vec3 grad_f{end.x[kFdot], end.x[kSensA + kF], end.x[kSensB + kF]};

    JacobianEval out;
    out.jacobian = kind == BranchKind::odd_even ? Mat2x3{grad_fdot, grad_rdot}
                                                : Mat2x3{grad_f, grad_rdot};
    out.residual = pick_residual({end.x[0], end.x[1], end.x[2], end.x[3], end.x[4]}, kind);
    out.min_r = min_r;
    out.state = end;
    return out;
}

CorrectorResult newton_correct(const Vec3& guess, BranchKind kind, const Vec3& direction,
                               double eps1, int max_iter, const IntegratorConfig& cfg,
                               double condition_limit) {
    Vec3 y = guess;
    for (int iter = 0; iter <= max_iter; ++iter) {
        const JacobianEval je = residual_jacobian(y, kind, cfg);
        if (inf2(je.residual) < eps1) {
            // independent re-verification with the original system
            const ResidualEval re = residual(y, kind, cfg);
            CorrectorResult out;
            out.point = {y.x, y.y, y.z, kind, re.residual, false, re.min_r};
            out.iterations = iter;
            out.moved = norm(y - guess);
            out.jacobian = je.jacobian;
            return out;
        }
        if (iter == max_iter) break;
        const Vec3 delta = solve_augmented(je.jacobian, direction, je.residual, condition_limit);
        y = y + delta;
        if (!(y.x > 0) || !std::isfinite(y.x) || !std::isfinite(y.y) || !std::isfinite(y.z))
            throw NoConvergence("corrector left the domain (tau <= 0 or non-finite)");
    }
    throw NoConvergence("corrector did not reach eps1 within max_iter iterations");
}

TauSolveResult solve_tau(double tau0, double a, double b, BranchKind kind,
                         const IntegratorConfig& cfg, int max_iter) {
    Parameters p{a, b};
    double tau = tau0;
    std::array<double, 2> res{};
    const double clamp_step = 0.05; // keeps Gauss-Newton from vaulting pericenter wiggles
    for (int iter = 0; iter < max_iter; ++iter) {
        const ResidualEval re = residual({tau, a, b}, kind, cfg);
        res = re.residual;
        const auto rhs = rhs_original(re.state, p, cfg.collision_floor);
        const double g0 = kind == BranchKind::odd_even ? rhs[kFdot] : rhs[kF];
        const double g1 = rhs[kRdot];
        const double gg = g0 * g0 + g1 * g1;
        if (gg == 0.0) throw SingularJacobian("vanishing time derivative in solve_tau");
        double dtau = -(g0 * res[0] + g1 * res[1]) / gg;
        dtau = std::clamp(dtau, -clamp_step, clamp_step);
        tau += dtau;
        if (!(tau > 0)) throw NoConvergence("solve_tau left tau > 0 domain");
        if (std::fabs(dtau) < 1e-14 * std::max(1.0, std::fabs(tau))) {
            const ResidualEval fin = residual({tau, a, b}, kind, cfg);
            return {tau, fin.residual, iter + 1};
        }
    }
    throw NoConvergence("solve_tau did not converge");
}

TauBSolveResult solve_tau_b(double tau0, double a, double b0, BranchKind kind,
                            const IntegratorConfig& cfg, double tol, int max_iter) {
    double tau = tau0, b = b0;
    const double clamp_step = 5e-4; // near-collision roots sit between steep wiggles
    for (int iter = 0; iter < max_iter; ++iter) {
        const JacobianEval je = residual_jacobian({tau, a, b}, kind, cfg);
        if (inf2(je.residual) < tol) return {tau, b, je.residual, iter};
        // 2x2 Newton in (tau, b): columns 0 and 2 of the Jacobian
        const double j00 = je.jacobian.row0.x, j01 = je.jacobian.row0.z;
        const double j10 = je.jacobian.row1.x, j11 = je.jacobian.row1.z;
        const double det = j00 * j11 - j01 * j10;
        if (det == 0.0 || !std::isfinite(det))
            throw SingularJacobian("singular (tau,b) Newton system");
        const double r0 = je.residual[0], r1 = je.residual[1];
        double dtau = (-r0 * j11 + r1 * j01) / det;
        double db = (-r1 * j00 + r0 * j10) / det;
        const double len = std::sqrt(dtau * dtau + db * db);
        if (len > clamp_step) {
            dtau *= clamp_step / len;
            db *= clamp_step / len;
        }
        tau += dtau;
        b += db;
        if (!(tau > 0)) throw NoConvergence("solve_tau_b left tau > 0 domain");
    }
    throw NoConvergence("solve_tau_b did not converge");
}

} // namespace iso3bp
