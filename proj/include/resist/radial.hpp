#pragma once

// Radially symmetric Newton problem: minimize R(phi) = int_0^L r/(1+phi'^2) dr
// over concave, monotone non-increasing profiles with 0 <= phi <= M.

#include "resist/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace resist {

struct RadialProfile {
    double L = 1.0;              // disc radius
    double M = 1.0;              // height bound
    std::vector<double> r;       // grid 0 = r0 < ... < rN = L
    std::vector<double> phi;     // values at the grid radii

    int cells() const { return static_cast<int>(r.size()) - 1; }
    // Descent slope of cell j, nonnegative and non-decreasing outward for an
    // admissible profile.
    double slope(int j) const { return (phi[j] - phi[j + 1]) / (r[j + 1] - r[j]); }
};

RadialProfile uniform_profile(double M, double L, int N);

// Throws InvalidProfile when monotonicity/concavity/bounds fail beyond
// tau_conc (scaled by max(1, M/L) for the slope comparisons).
void validate_profile(const RadialProfile& p, double tau_conc = 1e-9);

// Exact per-cell integration of r/(1+k^2): each cell contributes
// (r_{j+1}^2 - r_j^2)/2 / (1 + k_j^2).
double resistance_radial(const RadialProfile& p);

// Least concave monotone majorant of the clamped values, in place on phi.
// Projection used by the solver and by profile construction helpers.
void project_profile(RadialProfile& p);

struct RadialTraceRow {
    int iter;
    double objective;
    std::string step;
};

struct SolveRadialOptions {
    int multistart = 6;
    std::uint64_t seed = 12345;
    int max_gradient_iters = 400;
    double delta_min = 1e-10;     // finest coordinate move, relative to M
    std::vector<RadialTraceRow>* trace = nullptr;
};

RadialProfile solve_radial(double M, double L, int N, const SolveRadialOptions& opts = {});

}  // namespace resist
