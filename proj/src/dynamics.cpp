#include "iso3bp/dynamics.hpp"

#include <cmath>

#include "iso3bp/errors.hpp"

namespace iso3bp {

double axis_separation(double f, double r) {
    return std::sqrt(r * r + 4.0 * f * f);
}

void check_collision_floor(double f, double r, double t, double floor) {
    if (!(r > floor))
        throw CollisionError("R at or below collision floor", t);
    if (!(axis_separation(f, r) > floor))
        throw CollisionError("S at or below collision floor", t);
}

std::array<double, 5> rhs_original(const ReducedState& s, const Parameters& p,
                                   double collision_floor) {
    check_collision_floor(s.f(), s.r(), s.t, collision_floor);
    const double x1 = s.x[kF], x2 = s.x[kR];
    const double u = 4.0 * x1 * x1 + x2 * x2;      // S^2
    const double s3 = u * std::sqrt(u);            // S^3
    const double r2 = x2 * x2, r3 = r2 * x2;
    return {
        s.x[kFdot],
        s.x[kRdot],
        -400.0 * x1 / s3,
        100.0 * p.a * p.a / r3 - 25.0 / r2 - 200.0 * x2 / s3,
        10.0 * p.a / r2,
    };
}

std::array<double, 15> rhs_extended(const ExtendedState& s, const Parameters& p,
                                    double collision_floor) {
    check_collision_floor(s.f(), s.r(), s.t, collision_floor);
    const double x1 = s.x[0], x2 = s.x[1];
    const double u = 4.0 * x1 * x1 + x2 * x2;
    const double su = std::sqrt(u);
    const double s3 = u * su;      // u^{3/2}
    const double s5 = u * u * su;  // u^{5/2}
    const double r2 = x2 * x2, r3 = r2 * x2, r4 = r2 * r2;
    const double a = p.a;

    std::array<double, 15> d{};
    d[0] = s.x[2];
    d[1] = s.x[3];
    d[2] = -400.0 * x1 / s3;
    d[3] = 100.0 * a * a / r3 - 25.0 / r2 - 200.0 * x2 / s3;
    d[4] = 10.0 * a / r2;

    // Sensitivity block w.r.t. a (x6..x10) and w.r.t. b (x11..x15): the only
    // difference is the inhomogeneous 200 a / x2^3 and 10 / x2^2 terms, which
    // appear in the a-block alone.
    for (int off : {kSensA, kSensB}) {
        const double pf = s.x[off + kF];    // dF/dp
        const double pr = s.x[off + kR];    // dR/dp
        d[off + kF] = s.x[off + kFdot];
        d[off + kR] = s.x[off + kRdot];
        d[off + kFdot] = 3200.0 * pf * x1 * x1 / s5 + 1200.0 * x2 * pr * x1 / s5
                       - 400.0 * x2 * x2 * pf / s5;
        d[off + kRdot] = -300.0 * a * a * pr / r4 + 2400.0 * x1 * x2 * pf / s5
                       + 50.0 * pr / r3 + 600.0 * x2 * x2 * pr / s5 - 200.0 * pr / s3;
        d[off + kTheta] = -20.0 * a * pr / r3;
    }
    d[kSensA + kRdot] += 200.0 * a / r3;
    d[kSensA + kTheta] += 10.0 / r2;
    return d;
}

double energy(const ReducedState& s, const Parameters& p, double collision_floor) {
    check_collision_floor(s.f(), s.r(), s.t, collision_floor);
    const double big_s = axis_separation(s.f(), s.r());
    const double r = s.r();
    return 200.0 * s.fdot() * s.fdot() + 100.0 * s.rdot() * s.rdot()
         + 10000.0 * p.a * p.a / (r * r) - 40000.0 / big_s - 5000.0 / r;
}

BodyPositions embed_positions(const ReducedState& s) {
    const double c = std::cos(s.theta()), sn = std::sin(s.theta());
    const double r = s.r(), f = s.f();
    return {
        {0.0, 0.0, f},
        {r * c, r * sn, -f},
        {-r * c, -r * sn, -f},
    };
}

BodyVelocities embed_velocities(const ReducedState& s, const Parameters& p) {
    const double c = std::cos(s.theta()), sn = std::sin(s.theta());
    const double r = s.r(), rd = s.rdot(), fd = s.fdot();
    const double theta_dot = 10.0 * p.a / (r * r);
    const double vx = rd * c - r * theta_dot * sn;
    const double vy = rd * sn + r * theta_dot * c;
    return {
        {0.0, 0.0, fd},
        {vx, vy, -fd},
        {-vx, -vy, -fd},
    };
}

std::pair<double, double> pair_distances(const ReducedState& s) {
    return {2.0 * s.r(), axis_separation(s.f(), s.r())};
}

} // namespace iso3bp
