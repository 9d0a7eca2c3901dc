// Locates the bifurcation point B on the odd/even branch as the minimizer of
// |Z| (the odd-system tangent field evaluated at half period) and refines it
// by golden-section search along the branch. Also derives an odd-branch seed
// from B by stepping into the plane transverse to the local branch tangent.
#ifndef ISO3BP_BIFURCATION_HPP
#define ISO3BP_BIFURCATION_HPP

#include <cstddef>
#include <vector>

#include "iso3bp/continuation.hpp"

namespace iso3bp {

// |Z| of an odd/even branch point, evaluated at twice its quarter-period time.
double z_norm_at(const CurvePoint& pt, const IntegratorConfig& cfg);

struct ZProfileEntry {
    double arc = 0;      // cumulative arc length along the stored polyline
    double z_norm = 0;
    std::size_t index = 0; // index into branch.points
};

// Parallel scan over stored points (stride > 1 skips intermediates).
std::vector<ZProfileEntry> z_profile(const Branch& branch, const IntegratorConfig& cfg,
                                     std::size_t stride = 1, bool serial = false);

struct BifurcationReport {
    CurvePoint point;      // quarter-period coordinates of B
    double z_norm = 0;
    CurvePoint bracket_lo, bracket_hi;
    double bracket_arc = 0; // final bracket width in arc length
    int evaluations = 0;    // corrector-projected trial evaluations
    double period() const { return point.period(); }
};

// Coarse scan over pillar points, then golden-section refinement with
// corrector re-projection at every trial point until the arc-length bracket
// is below `bracket_tol`. Throws NoInteriorMinimum when the scan minimum sits
// at an endpoint.
BifurcationReport find_bifurcation(const Branch& s1, const IntegratorConfig& cfg,
                                   double bracket_tol = 1e-6);

// Seeds the odd branch near B: corrects B +/- delta * u on the odd system,
// where u spans the crossing plane transversally to the local S1 direction.
// The result is discriminated from the S1 image by its odd/even residual at
// half its tau. Throws Error if no transverse seed converges.
CurvePoint seed_odd_branch(const BifurcationReport& rep, const IntegratorConfig& cfg,
                           double delta = 1e-3, double eps = 1e-9);

} // namespace iso3bp

#endif
