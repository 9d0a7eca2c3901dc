// State vectors of the reduced and extended systems, and the (a,b) family parameters.
//
// Component layout (both systems share the first five slots):
//   0: F      vertical coordinate of the axis body
//   1: R      half-distance between the two orbiting bodies
//   2: dF/dt
//   3: dR/dt
//   4: Theta  accumulated rotation angle
// Extended system appends the parameter sensitivities:
//   5..9  : d/da of (F, R, dF/dt, dR/dt, Theta)
//   10..14: d/db of (F, R, dF/dt, dR/dt, Theta)
#ifndef ISO3BP_STATE_HPP
#define ISO3BP_STATE_HPP

#include <array>
#include <cstddef>

namespace iso3bp {

struct Parameters {
    double a = 0; // angular-momentum parameter
    double b = 0; // initial vertical velocity dF/dt(0)
};

inline constexpr int kF = 0;
inline constexpr int kR = 1;
inline constexpr int kFdot = 2;
inline constexpr int kRdot = 3;
inline constexpr int kTheta = 4;
inline constexpr int kSensA = 5;  // offset of the d/da block
inline constexpr int kSensB = 10; // offset of the d/db block

template <std::size_t N>
struct State {
    double t = 0;
    std::array<double, N> x{};

    double f() const { return x[kF]; }
    double r() const { return x[kR]; }
    double fdot() const { return x[kFdot]; }
    double rdot() const { return x[kRdot]; }
    double theta() const { return x[kTheta]; }
};

using ReducedState = State<5>;
using ExtendedState = State<15>;

// Standard family initial conditions: F=0, R=10, dF/dt=b, dR/dt=0, Theta=0.
inline ReducedState initial_reduced(const Parameters& p) {
    ReducedState s;
    s.x = {0.0, 10.0, p.b, 0.0, 0.0};
    return s;
}

// Extended initial conditions: sensitivities all zero except dF'/db(0) = 1
// (F'(0) = b, so its b-derivative starts at one).
inline ExtendedState initial_extended(const Parameters& p) {
    ExtendedState s;
    s.x.fill(0.0);
    s.x[kR] = 10.0;
    s.x[kFdot] = p.b;
    s.x[kSensB + kFdot] = 1.0;
    return s;
}

inline ReducedState project(const ExtendedState& s) {
    ReducedState r;
    r.t = s.t;
    for (int i = 0; i < 5; ++i) r.x[i] = s.x[i];
    return r;
}

} // namespace iso3bp

#endif
