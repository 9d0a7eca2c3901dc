// Read-only fixture data: the named points P0, P1, P2, P3 and B, the worked
// continuation example, and the five tables of periodic solutions (45 rows).
// Values are stored exactly as printed; P0 as exact rationals.
#ifndef ISO3BP_FIXTURES_HPP
#define ISO3BP_FIXTURES_HPP

#include <span>

#include "iso3bp/boundary.hpp"
#include "iso3bp/vec3.hpp"

namespace iso3bp::fixtures {

// Full-period coordinates (T, a, b).
struct NamedPoint {
    const char* name;
    double T, a, b;
};

// Seed point in quarter-period coordinates (tau, a, b); exact rationals.
Vec3 p0();

NamedPoint p1();
NamedPoint p2();
NamedPoint p3();
NamedPoint bifurcation_point();

// local minima of R reported for the near-collision solutions
inline constexpr double kP2MinR = 0.0547972; // at t = T/4
inline constexpr double kP1MinR = 0.0369262; // at t = T/2

// Worked continuation example (eps1=1e-6, eps2=eps3=5e-5, h=1e-3, k=200 from P0).
Vec3 worked_example_q200();
Vec3 worked_example_q1();

struct TableRow {
    double T, a, b;
    int p, q;        // Theta(T) = p*pi/q
    BranchKind kind;
    int table;       // 1..5 in document order
    int grid_row, grid_col;
    bool advisory;   // excluded from blocking verification
};

std::span<const TableRow> table_rows(); // 45 rows

} // namespace iso3bp::fixtures

#endif
