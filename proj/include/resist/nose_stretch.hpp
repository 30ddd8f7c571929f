#pragma once

// Nose stretching. For a convex body C and an apex O outside C, the family
//   C(s) = union of lam C + (1 - lam) O over sqrt(1-s) <= lam <= 1
// interpolates C(0) = C to C(1) = Conv(C u {O}). The boundary splits into the
// near region (facets visible from O), the far region, and the lateral tangent
// cone surface V; the surface-area measure moves linearly in s,
//   nu(s) = nu(dC) + s (nu_V - nu_near),
// so any functional F(nu) = int f dnu is affine along the family. Negative s
// retracts the nose and is admissible only while the dilated near boundary
// stays clear of a caller-supplied obstacle set.

#include "resist/core.hpp"
#include "resist/polytope.hpp"
#include "resist/pressure_law.hpp"
#include "resist/surface_measure.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace resist {

struct NoseDecomposition {
    Vec3 apex = Vec3::Zero();
    std::vector<int> near_facets;                    // strictly visible from the apex
    std::vector<int> far_facets;                     // the rest; tangent planes land here
    std::vector<std::pair<int, int>> silhouette;     // directed edges (u, w), near facet on the left
    std::vector<std::array<Vec3, 3>> cone_triangles; // (apex, u, w), outward orientation
    DiscreteSurfaceMeasure near_measure;             // nu restricted to the near region
    DiscreteSurfaceMeasure cone_measure;             // nu_V of the tangent cone surface
    DiscreteSurfaceMeasure nu0;                      // nu_V - nu_near, the measure velocity
    double near_area = 0.0;
    double cone_area = 0.0;
};

NoseDecomposition decompose(const Polytope& C, const Vec3& apex, const Tolerances& tol = {});

// Obstacle set for negative-s admissibility: the caller's surrogate for
// C1 u closure(Sing C). Points must stay strictly clear of the dilated near
// boundary, segments likewise.
struct ObstacleSet {
    std::vector<Vec3> points;
    std::vector<Segment3> segments;
};

// The stretched body. s = 1 is the full nose Conv(C u {O}); s in [0, 1) goes
// through the halfspace representation C_- intersect sqrt(1-s) C_+; negative s
// (down to -0.5) is validated against the obstacle set and throws ObstacleHit
// when the dilated near boundary touches it.
Polytope stretch(const Polytope& C, const Vec3& apex, double s,
                 const ObstacleSet& obstacles = {}, const Tolerances& tol = {});

// Largest admissible negative s (<= 0), found by bisection on the obstacle
// clearance predicate, capped at -0.5. Returns 0 when no negative range opens.
double negative_range(const Polytope& C, const Vec3& apex, const ObstacleSet& obstacles,
                      const Tolerances& tol = {});

struct FamilySample {
    double s = 0.0;
    double F = 0.0;          // functional of the full boundary measure of C(s)
    double area_near = 0.0;  // (1 - s) area(near region), the linear-model share
    double area_V = 0.0;     // s area(V)
    double closure = 0.0;    // closure defect of the constructed boundary measure
};

std::vector<FamilySample> resistance_along_family(const Polytope& C, const Vec3& apex,
                                                  const PressureLaw& law,
                                                  const std::vector<double>& s_grid,
                                                  const Tolerances& tol = {});

struct FamilyMeasureReport {
    double max_atom_dev = 0.0;      // max over grid of atom-wise |nu(s) - nu - s nu0|
    double max_atom_dev_rel = 0.0;  // relative to area(dC)
};

FamilyMeasureReport family_measure_check(const Polytope& C, const Vec3& apex,
                                         const std::vector<double>& s_grid,
                                         const Tolerances& tol = {});

struct DerivativeReport {
    double analytic = 0.0;  // F(V) - F(near region)
    double fd = 0.0;        // Richardson finite difference of F(dC(s)) at s = 0
    bool two_sided = false; // false when the negative side was inadmissible
    double s_min = 0.0;     // admissible negative range used
    double h = 0.0;
};

// h is the base finite-difference step; the stencil is {+-h, +-2h} two-sided
// or {0, h, 2h} one-sided when negative s is inadmissible (ObstacleHit is
// absorbed into the flag, not rethrown).
DerivativeReport stretch_derivative(const Polytope& C, const Vec3& apex, const PressureLaw& law,
                                    double h, const ObstacleSet& obstacles,
                                    const Tolerances& tol = {});

// Multi-nose family. Validation: every apex strictly outside C, and every
// open apex-apex segment meets the interior of C (coincident apexes fail
// this). Violations throw FamilyInvariantViolated.
struct NoseFamily {
    Polytope C;
    std::vector<Vec3> apexes;
};

void validate_family(const NoseFamily& fam, const Tolerances& tol = {});

// C(s_vec) = Conv(union of the individual stretches); requires s_i in [0, 1].
Polytope multi_stretch(const NoseFamily& fam, const std::vector<double>& s_vec,
                       const Tolerances& tol = {});

// Convexity surrogate: sampled points of the big hull must lie in at least
// one individual stretch. Returns the largest containment excess over the
// samples (<= 0 means the union covers the hull).
double multi_stretch_hull_gap(const NoseFamily& fam, const std::vector<double>& s_vec,
                              int n_samples, std::uint64_t seed, const Tolerances& tol = {});

struct ConeDisjointnessReport {
    double min_near_near = 0.0;      // min distance between near segments, i != j
    double min_tangent_tangent = 0.0;
    double min_near_tangent = 0.0;
    int violations = 0;              // pairs closer than strict_off * diameter
};

// Samples rays from each apex (area-weighted on the near region, length-
// weighted on the silhouette) and measures pairwise segment distances.
ConeDisjointnessReport check_cone_disjointness(const NoseFamily& fam, int segments_per_apex,
                                               std::uint64_t seed, const Tolerances& tol = {});

struct MultiMeasureReport {
    double max_atom_dev_rel = 0.0;  // max over the s grid, relative to area(dC)
    double max_F_dev_rel = 0.0;     // same for the functional identity
};

// Checks nu(dC(s_vec)) = nu(dC) + sum_i s_i nu0_i atom-wise and the induced
// affine identity for F, over a grid of s vectors.
MultiMeasureReport measure_multi_check(const NoseFamily& fam, const PressureLaw& law,
                                       const std::vector<std::vector<double>>& s_vectors,
                                       const Tolerances& tol = {});

}  // namespace resist
