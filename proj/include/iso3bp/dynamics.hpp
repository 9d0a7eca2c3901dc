// Right-hand sides of the reduced and extended ODE systems, the Cartesian
// embedding of a reduced state, pairwise distances and the conserved energy.
//
// The family is fixed: masses (200, 100, 100), G = 1, which is what the
// coefficients 400, 100 a^2, 25, 200 and 10 a encode.
#ifndef ISO3BP_DYNAMICS_HPP
#define ISO3BP_DYNAMICS_HPP

#include <array>
#include <utility>

#include "iso3bp/state.hpp"
#include "iso3bp/vec3.hpp"

namespace iso3bp {

inline constexpr double kDefaultCollisionFloor = 1e-8;

// S = sqrt(R^2 + 4 F^2): distance between the axis body and either orbiter.
double axis_separation(double f, double r);

// Throws CollisionError when R or S is at or below the floor.
void check_collision_floor(double f, double r, double t, double floor = kDefaultCollisionFloor);

std::array<double, 5> rhs_original(const ReducedState& s, const Parameters& p,
                                   double collision_floor = kDefaultCollisionFloor);

std::array<double, 15> rhs_extended(const ExtendedState& s, const Parameters& p,
                                    double collision_floor = kDefaultCollisionFloor);

// Conserved energy; an integrator diagnostic, not part of the ODE.
double energy(const ReducedState& s, const Parameters& p,
              double collision_floor = kDefaultCollisionFloor);

struct BodyPositions {
    Vec3 body1; // axis body, mass 200
    Vec3 body2; // orbiter, mass 100
    Vec3 body3; // orbiter, mass 100
};

struct BodyVelocities {
    Vec3 body1, body2, body3;
};

BodyPositions embed_positions(const ReducedState& s);
BodyVelocities embed_velocities(const ReducedState& s, const Parameters& p);

// (distance between the two orbiters, distance orbiter<->axis body) = (2R, S).
std::pair<double, double> pair_distances(const ReducedState& s);

} // namespace iso3bp

#endif
