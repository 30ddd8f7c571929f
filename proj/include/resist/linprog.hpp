#pragma once

// Dense low-dimensional linear programming via Seidel's incremental algorithm.
// The toolkit needs LPs in at most four variables with a few hundred
// constraints (Chebyshev centers of halfspace systems, strict-interior depth
// along a segment, separation certificates in tests), well inside the
// expected O(d! n) regime.

#include "resist/core.hpp"

#include <optional>

namespace resist {

struct LpProblem {
    Eigen::MatrixXd A;      // constraint rows, A.row(i) . x <= b(i)
    Eigen::VectorXd b;
    Eigen::VectorXd c;      // objective, maximized
    double box = 1e6;       // implicit |x_j| <= box keeps every subproblem bounded
};

// Maximizes c.x over the constraint set intersected with the box. Returns
// nullopt when infeasible. Deterministic: a fixed-seed shuffle of the
// constraint order gives the expected-linear behaviour without sacrificing
// reproducibility.
std::optional<Eigen::VectorXd> seidel_lp(const LpProblem& lp);

}  // namespace resist
