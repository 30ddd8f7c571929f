#pragma once

// Test-side oracles and shared instances. Each oracle reaches its answer by a
// route independent of the code path under test: the radial optimum through
// optimality conditions with a multiplier bisection, H-polytope vertices
// through plane-triple enumeration, hull and stretch geometry through support
// functions evaluated directly on point sets.

#include "resist/nose_stretch.hpp"
#include "resist/polytope.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace resist::testing {

struct RadialOracle {
    double resistance = 0.0;
    double dual_bound = 0.0;  // Lagrangian lower bound, certifies near-optimality
    double gap_rel = 0.0;     // (primal - dual) / primal
    std::vector<double> r, phi;
};

// Pointwise Lagrangian minimization over slopes in {0} u [1, inf) per cell,
// with the height budget sum k_j dr_j = M enforced by bisection on the
// multiplier. The per-cell cost rho/(1+k^2) + lambda k never has an interior
// minimum in (0, 1), and its argmin is nondecreasing in rho, so the selected
// slope field is automatically an admissible concave profile.
RadialOracle radial_oracle(double M, double L, int N);

std::vector<Vec3> halfspace_vertices_bruteforce(const std::vector<Vec3>& normals,
                                                const std::vector<double>& offsets, double tol);

double max_support_of_points(const std::vector<Vec3>& pts, const Vec3& dir);

// max_i |support(P, d_i) - expected(d_i)| over seeded random unit directions.
double support_mismatch(const Polytope& P, const std::function<double(const Vec3&)>& expected,
                        int n_dirs, std::uint64_t seed);

// Symmetric, max-over-points distance between two vertex sets.
double vertex_set_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

Polytope make_cube();  // unit cube [0,1]^3
Polytope make_tetra(); // regular tetrahedron, edge 2 sqrt(2)
Polytope random_polytope(std::uint64_t seed, int n_points = 20);

// Square frustum cut from the pyramid with apex frustum_tip(); stretching the
// frustum toward the tip is affine through s = 0 on both sides, which makes
// it the clean two-sided derivative instance.
Polytope make_frustum();
Vec3 frustum_tip();

Vec3 outside_apex(const Polytope& P, std::uint64_t seed, double factor = 1.5);

NoseFamily cube_two_apex_family();
// Opposite apexes over a random hull, filtered until the near facet sets and
// silhouettes are disjoint and a coarse sampled cone screen passes.
NoseFamily random_two_apex_family(std::uint64_t seed);

}  // namespace resist::testing
