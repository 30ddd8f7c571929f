#include "resist/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace resist {
namespace {

double feas_slack(const Eigen::VectorXd& row, double rhs, double box) {
    return 1e-12 * (1.0 + std::abs(rhs) + row.lpNorm<1>() * box);
}

// Recursive core. Constraints are visited in the order given; the caller has
// already shuffled them once.
std::optional<Eigen::VectorXd> solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                     const Eigen::VectorXd& c, double box) {
    const int d = static_cast<int>(c.size());
    const int m = static_cast<int>(A.rows());

    if (d == 1) {
        double lo = -box, hi = box;
        for (int i = 0; i < m; ++i) {
            const double a = A(i, 0);
            if (std::abs(a) < 1e-14) {
                if (b(i) < -feas_slack(A.row(i), b(i), box)) return std::nullopt;
                continue;
            }
            if (a > 0)
                hi = std::min(hi, b(i) / a);
            else
                lo = std::max(lo, b(i) / a);
        }
        if (lo > hi + 1e-11 * (1.0 + std::abs(lo) + std::abs(hi))) return std::nullopt;
        Eigen::VectorXd x(1);
        x(0) = c(0) > 0 ? hi : (c(0) < 0 ? lo : std::clamp(0.0, lo, hi));
        return x;
    }

    // Start at the box optimum, then add constraints one at a time.
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) x(j) = c(j) > 0 ? box : (c(j) < 0 ? -box : 0.0);

    for (int i = 0; i < m; ++i) {
        if (A.row(i).dot(x) <= b(i) + feas_slack(A.row(i), b(i), box)) continue;

        // Optimum of the first i+1 constraints lies on constraint i; eliminate
        // the variable with the largest pivot and recurse in dimension d-1.
        int k = 0;
        A.row(i).cwiseAbs().maxCoeff(&k);
        const double g = A(i, k);
        if (std::abs(g) < 1e-14) return std::nullopt;  // 0.x <= b(i) violated

        // x_k = (b_i - sum_{j != k} A(i,j) x_j) / g substituted into rows
        // 0..i-1 plus the two box bounds on x_k.
        const int sub_m = i + 2;
        Eigen::MatrixXd As(sub_m, d - 1);
        Eigen::VectorXd bs(sub_m);
        auto reduced = [&](const Eigen::VectorXd& row, double rhs, Eigen::Ref<Eigen::VectorXd> out_row,
                           double& out_rhs) {
            const double f = row(k) / g;
            int col = 0;
            for (int j = 0; j < d; ++j) {
                if (j == k) continue;
                out_row(col++) = row(j) - f * A(i, j);
            }
            out_rhs = rhs - f * b(i);
        };
        for (int r = 0; r < i; ++r) {
            Eigen::VectorXd tmp(d - 1);
            double rhs;
            reduced(A.row(r), b(r), tmp, rhs);
            As.row(r) = tmp;
            bs(r) = rhs;
        }
        {
            // x_k <= box and -x_k <= box as general rows.
            Eigen::VectorXd up = Eigen::VectorXd::Zero(d), dn = Eigen::VectorXd::Zero(d);
            up(k) = 1.0;
            dn(k) = -1.0;
            Eigen::VectorXd tmp(d - 1);
            double rhs;
            reduced(up, box, tmp, rhs);
            As.row(i) = tmp;
            bs(i) = rhs;
            reduced(dn, box, tmp, rhs);
            As.row(i + 1) = tmp;
            bs(i + 1) = rhs;
        }
        Eigen::VectorXd cs(d - 1);
        {
            const double f = c(k) / g;
            int col = 0;
            for (int j = 0; j < d; ++j) {
                if (j == k) continue;
                cs(col++) = c(j) - f * A(i, j);
            }
        }

        auto sub = solve(As, bs, cs, box);
        if (!sub) return std::nullopt;

        int col = 0;
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
            if (j == k) continue;
            x(j) = (*sub)(col);
            s += A(i, j) * (*sub)(col);
            ++col;
        }
        x(k) = (b(i) - s) / g;
    }
    return x;
}

}  // namespace

std::optional<Eigen::VectorXd> seidel_lp(const LpProblem& lp) {
    require(lp.A.rows() == lp.b.size() && lp.A.cols() == lp.c.size(), ErrorKind::InvalidArgument,
            "seidel_lp: inconsistent problem dimensions");
    const int m = static_cast<int>(lp.A.rows());
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::shuffle(order.begin(), order.end(), rng);

    Eigen::MatrixXd A(m, lp.A.cols());
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
        A.row(i) = lp.A.row(order[i]);
        b(i) = lp.b(order[i]);
    }
    return solve(A, b, lp.c, lp.box);
}

}  // namespace resist
