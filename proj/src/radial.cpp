#include "resist/radial.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace resist {

namespace {

double cell_area(const RadialProfile& p, int j) {
    return 0.5 * (p.r[j + 1] * p.r[j + 1] - p.r[j] * p.r[j]);
}

double resistance_unchecked(const RadialProfile& p) {
    double R = 0.0;
    for (int j = 0; j < p.cells(); ++j) {
        const double k = p.slope(j);
        R += cell_area(p, j) / (1.0 + k * k);
    }
    return R;
}

// Least concave majorant of the points (x_i, y_i), evaluated back on the x
// grid. Upper convex hull by a monotone scan; x must be strictly increasing.
std::vector<double> upper_envelope(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    std::vector<int> hull;
    auto cross = [&](int o, int a, int b) {
        return (x[a] - x[o]) * (y[b] - y[o]) - (y[a] - y[o]) * (x[b] - x[o]);
    };
    for (int i = 0; i < n; ++i) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) >= 0.0)
            hull.pop_back();
        hull.push_back(i);
    }
    std::vector<double> out(n);
    size_t seg = 0;
    for (int i = 0; i < n; ++i) {
        while (seg + 1 < hull.size() && x[hull[seg + 1]] < x[i]) ++seg;
        if (seg + 1 >= hull.size()) {
            out[i] = y[hull.back()];
            continue;
        }
        const int a = hull[seg], b = hull[seg + 1];
        const double t = (x[i] - x[a]) / (x[b] - x[a]);
        out[i] = y[a] + t * (y[b] - y[a]);
    }
    return out;
}

struct CoordMove {
    bool feasible;
    double delta_R;
};

// Effect of setting phi[i] = c, touching only cells i-1 and i.
CoordMove probe_move(const RadialProfile& p, int i, double c) {
    const int N = p.cells();
    const double kl = i > 0 ? (p.phi[i - 1] - c) / (p.r[i] - p.r[i - 1]) : 0.0;
    const double kr = i < N ? (c - p.phi[i + 1]) / (p.r[i + 1] - p.r[i]) : 0.0;
    bool ok = true;
    if (i > 0) {
        if (i > 1 && kl < p.slope(i - 2)) ok = false;
        if (i == 1 && kl < 0.0) ok = false;
    }
    if (i < N) {
        if (i > 0 && kr < kl) ok = false;
        if (i == 0 && kr < 0.0) ok = false;
        if (i + 1 < N && p.slope(i + 1) < kr) ok = false;
    } else if (kl < (N >= 2 ? p.slope(N - 2) : 0.0)) {
        ok = false;
    }
    if (!ok) return {false, 0.0};

    double dR = 0.0;
    if (i > 0) {
        const double k0 = p.slope(i - 1);
        dR += cell_area(p, i - 1) * (1.0 / (1.0 + kl * kl) - 1.0 / (1.0 + k0 * k0));
    }
    if (i < N) {
        const double k0 = p.slope(i);
        dR += cell_area(p, i) * (1.0 / (1.0 + kr * kr) - 1.0 / (1.0 + k0 * k0));
    }
    return {true, dR};
}

// Pool-adjacent-violators fit: the closest nondecreasing sequence.
std::vector<double> pav_nondecreasing(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    std::vector<double> mean(n);
    std::vector<int> len(n);
    int top = 0;
    for (int i = 0; i < n; ++i) {
        mean[top] = v[i];
        len[top] = 1;
        ++top;
        while (top >= 2 && mean[top - 2] >= mean[top - 1]) {
            const int la = len[top - 2], lb = len[top - 1];
            mean[top - 2] = (mean[top - 2] * la + mean[top - 1] * lb) / (la + lb);
            len[top - 2] = la + lb;
            --top;
        }
    }
    std::vector<double> out;
    out.reserve(n);
    for (int b = 0; b < top; ++b) out.insert(out.end(), len[b], mean[b]);
    return out;
}

// Euclidean projection onto the admissible slope set {k nondecreasing,
// k >= 0, sum w_j k_j <= M}. The cone part is PAV plus a clamp (clamping a
// nondecreasing vector at a constant commutes with the isotonic fit); the
// budget multiplier comes from bisection, using that the projected budget is
// nonincreasing in the multiplier. Returned from the feasible side, so the
// budget is never exceeded.
std::vector<double> project_slopes(const std::vector<double>& v, const std::vector<double>& w,
                                   double M) {
    auto cone = [&](double mu) {
        std::vector<double> shifted(v.size());
        for (size_t j = 0; j < v.size(); ++j) shifted[j] = v[j] - mu * w[j];
        std::vector<double> k = pav_nondecreasing(shifted);
        for (double& x : k) x = std::max(x, 0.0);
        return k;
    };
    auto budget = [&](const std::vector<double>& k) {
        double b = 0.0;
        for (size_t j = 0; j < k.size(); ++j) b += w[j] * k[j];
        return b;
    };
    std::vector<double> k = cone(0.0);
    if (budget(k) <= M) return k;
    double lo = 0.0, hi = 1.0;
    while (budget(cone(hi)) > M) hi *= 2.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (budget(cone(mid)) > M ? lo : hi) = mid;
    }
    return cone(hi);
}

// Warm-start slopes from the separable Lagrangian relaxation. For a fixed
// multiplier mu the per-cell problem min_k a_j/(1+k^2) + mu w_j k puts its
// minimizer at 0 or on the branch k >= 1, never in between: the chord of
// 1/(1+k^2) from the origin is tangent at k = 1, so the tie between staying
// flat and taking slope happens exactly there. The total budget is monotone
// in mu, and bisection lands on the feasible side. Gradient descent cannot
// resolve that 0-or-1 dichotomy on its own because the objective is nearly
// affine along the tie direction.
std::vector<double> lagrangian_seed_slopes(const std::vector<double>& a,
                                           const std::vector<double>& w, double M) {
    const int n = static_cast<int>(a.size());
    auto cell_slope = [](double c) {
        if (c >= 0.5) return 0.0;
        auto m = [](double k) {
            const double d = 1.0 + k * k;
            return 2.0 * k / (d * d);
        };
        double lo = 1.0, hi = 2.0;
        while (m(hi) > c) hi *= 2.0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (m(mid) > c ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    auto slopes = [&](double mu) {
        std::vector<double> k(n);
        for (int j = 0; j < n; ++j) k[j] = cell_slope(mu * w[j] / a[j]);
        for (int j = 1; j < n; ++j) k[j] = std::max(k[j], k[j - 1]);
        return k;
    };
    auto budget = [&](const std::vector<double>& k) {
        double b = 0.0;
        for (int j = 0; j < n; ++j) b += w[j] * k[j];
        return b;
    };
    double lo = 0.0, hi = 1.0;
    while (budget(slopes(hi)) > M) hi *= 2.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (budget(slopes(mid)) > M ? lo : hi) = mid;
    }
    return slopes(hi);
}

void descend(RadialProfile& p, const SolveRadialOptions& opts, int* iter_counter) {
    auto log = [&](double obj, const char* step) {
        if (opts.trace) opts.trace->push_back({(*iter_counter)++, obj, step});
    };
    const int N = p.cells();

    // Work in slope space: the functional is a separable sum over cell
    // slopes, invariant to the rim offset, and the admissible set is the
    // isotonic cone under a height budget. Differencing phi instead would
    // scale the conditioning with N.
    std::vector<double> w(N), a(N), k(N);
    for (int j = 0; j < N; ++j) {
        w[j] = p.r[j + 1] - p.r[j];
        a[j] = cell_area(p, j);
        k[j] = std::max(p.slope(j), 0.0);
    }
    k = project_slopes(k, w, p.M);
    auto value = [&](const std::vector<double>& kk) {
        double R = 0.0;
        for (int j = 0; j < N; ++j) R += a[j] / (1.0 + kk[j] * kk[j]);
        return R;
    };
    double R = value(k);
    log(R, "start");

    std::vector<double> grad(N), trial(N);
    double eta = static_cast<double>(N) / p.L;
    int stall = 0;
    for (int it = 0; it < opts.max_gradient_iters && stall < 40; ++it) {
        for (int j = 0; j < N; ++j) {
            const double d = 1.0 + k[j] * k[j];
            grad[j] = -2.0 * a[j] * k[j] / (d * d);
        }
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (int j = 0; j < N; ++j) trial[j] = k[j] - eta * grad[j];
            std::vector<double> kt = project_slopes(trial, w, p.M);
            const double Rt = value(kt);
            if (Rt < R) {
                k = std::move(kt);
                R = Rt;
                eta *= 1.5;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (accepted) {
            stall = 0;
            log(R, "grad");
        } else {
            ++stall;
        }
        if (eta < 1e-16) break;
    }

    // Canonical representative: phi(L) = 0, heights by cumulative slope.
    p.phi[N] = 0.0;
    for (int j = N - 1; j >= 0; --j) p.phi[j] = p.phi[j + 1] + w[j] * k[j];
    for (double& v : p.phi) v = std::min(v, p.M);

    // Coordinate polish with a shrinking step; moves stay inside the
    // admissible cone so no reprojection is needed.
    for (double delta = 0.25 * p.M; delta >= opts.delta_min * p.M; delta *= 0.5) {
        for (int sweep = 0; sweep < 60; ++sweep) {
            bool improved = false;
            for (int i = 0; i <= N; ++i) {
                for (double sgn : {-1.0, 1.0}) {
                    const double c = std::clamp(p.phi[i] + sgn * delta, 0.0, p.M);
                    if (c == p.phi[i]) continue;
                    const CoordMove mv = probe_move(p, i, c);
                    if (mv.feasible && mv.delta_R < 0.0) {
                        p.phi[i] = c;
                        R += mv.delta_R;
                        improved = true;
                    }
                }
            }
            if (!improved) break;
        }
        log(resistance_unchecked(p), "coord");
    }
}

}  // namespace

RadialProfile uniform_profile(double M, double L, int N) {
    require(M > 0 && L > 0, ErrorKind::InvalidArgument, "profile: M and L must be positive");
    require(N >= 1, ErrorKind::InvalidArgument, "profile: need at least one cell");
    RadialProfile p;
    p.M = M;
    p.L = L;
    p.r.resize(N + 1);
    p.phi.assign(N + 1, 0.0);
    for (int i = 0; i <= N; ++i) p.r[i] = L * static_cast<double>(i) / N;
    p.r[N] = L;
    return p;
}

void validate_profile(const RadialProfile& p, double tau_conc) {
    require(p.M > 0 && p.L > 0, ErrorKind::InvalidProfile, "profile: M and L must be positive");
    require(p.r.size() >= 2 && p.r.size() == p.phi.size(), ErrorKind::InvalidProfile,
            "profile: grid/value size mismatch");
    require(std::abs(p.r.front()) <= tau_conc * p.L && std::abs(p.r.back() - p.L) <= tau_conc * p.L,
            ErrorKind::InvalidProfile, "profile: grid must span [0, L]");
    const double vtol = tau_conc * std::max(1.0, p.M);
    const double stol = tau_conc * std::max(1.0, p.M / p.L);
    for (size_t i = 0; i + 1 < p.r.size(); ++i)
        require(p.r[i + 1] > p.r[i], ErrorKind::InvalidProfile, "profile: grid not increasing");
    for (double v : p.phi)
        require(v >= -vtol && v <= p.M + vtol, ErrorKind::InvalidProfile,
                "profile: value outside [0, M]");
    for (int j = 0; j < p.cells(); ++j) {
        require(p.slope(j) >= -stol, ErrorKind::InvalidProfile, "profile: not non-increasing");
        if (j + 1 < p.cells())
            require(p.slope(j + 1) >= p.slope(j) - stol, ErrorKind::InvalidProfile,
                    "profile: not concave");
    }
}

double resistance_radial(const RadialProfile& p) {
    validate_profile(p);
    return resistance_unchecked(p);
}

void project_profile(RadialProfile& p) {
    for (double& v : p.phi) v = std::clamp(v, 0.0, p.M);
    p.phi = upper_envelope(p.r, p.phi);
    // Monotone non-increasing: flatten any initial rise with a suffix max.
    for (int i = static_cast<int>(p.phi.size()) - 2; i >= 0; --i)
        p.phi[i] = std::max(p.phi[i], p.phi[i + 1]);
}

RadialProfile solve_radial(double M, double L, int N, const SolveRadialOptions& opts) {
    require(N >= 16, ErrorKind::InvalidArgument, "solve_radial: N must be at least 16");
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    auto make_seed = [&](int which) {
        RadialProfile p = uniform_profile(M, L, N);
        switch (which) {
            case 0:  // flat disc
                break;
            case 1: {  // separable relaxation warm start
                std::vector<double> w(N), a(N);
                for (int j = 0; j < N; ++j) {
                    w[j] = p.r[j + 1] - p.r[j];
                    a[j] = cell_area(p, j);
                }
                const std::vector<double> k = lagrangian_seed_slopes(a, w, M);
                p.phi[N] = 0.0;
                for (int j = N - 1; j >= 0; --j) p.phi[j] = p.phi[j + 1] + w[j] * k[j];
                for (double& v : p.phi) v = std::min(v, M);
                break;
            }
            case 2:  // cone
                for (int i = 0; i <= N; ++i) p.phi[i] = M * (1.0 - p.r[i] / L);
                break;
            case 3:  // flat top with a linear flank
                for (int i = 0; i <= N; ++i)
                    p.phi[i] = M * std::clamp((L - p.r[i]) / (0.65 * L), 0.0, 1.0);
                break;
            case 4:  // full cylinder
                p.phi.assign(N + 1, M);
                break;
            default: {  // random concave drop
                double v = M * (0.5 + 0.5 * uni(rng));
                double drop = v / N * 0.2;
                for (int i = 0; i <= N; ++i) {
                    p.phi[i] = std::max(0.0, v);
                    v -= drop;
                    drop *= (1.0 + 2.0 * uni(rng) / N);
                }
                project_profile(p);
                break;
            }
        }
        return p;
    };

    RadialProfile best;
    double best_R = std::numeric_limits<double>::max();
    int iter_counter = 0;
    for (int s = 0; s < std::max(1, opts.multistart); ++s) {
        RadialProfile p = make_seed(s);
        descend(p, opts, &iter_counter);
        const double R = resistance_unchecked(p);
        const bool tie = std::abs(R - best_R) <= 1e-12 * std::max(1.0, std::abs(best_R));
        if (R < best_R && !tie) {
            best = p;
            best_R = R;
        } else if (tie && p.phi < best.phi) {
            best = p;  // deterministic tie-break
            best_R = std::min(best_R, R);
        }
    }
    validate_profile(best);
    return best;
}

}  // namespace resist
