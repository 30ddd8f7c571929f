#include "oracle.hpp"

#include "resist/surface_measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace resist::testing {

namespace {

// Minimizer of rho/(1+k^2) + lambda k over k >= 1. The cost is convex there
// (its second derivative is 2 rho (3k^2-1)/(1+k^2)^3), so bisection on the
// derivative suffices.
double sloped_branch_argmin(double rho, double lambda) {
    auto deriv = [&](double k) {
        const double q = 1.0 + k * k;
        return -2.0 * rho * k / (q * q) + lambda;
    };
    if (deriv(1.0) >= 0.0) return 1.0;
    double hi = 2.0;
    while (deriv(hi) < 0.0) hi *= 2.0;
    double lo = hi / 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (deriv(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

RadialOracle radial_oracle(double M, double L, int N) {
    RadialOracle out;
    out.r.resize(static_cast<size_t>(N) + 1);
    for (int j = 0; j <= N; ++j) out.r[j] = L * static_cast<double>(j) / N;
    const double dr = L / N;
    std::vector<double> m(static_cast<size_t>(N)), rho(static_cast<size_t>(N));
    for (int j = 0; j < N; ++j) {
        m[j] = 0.5 * (out.r[j + 1] * out.r[j + 1] - out.r[j] * out.r[j]);
        rho[j] = m[j] / dr;
    }

    std::vector<double> slopes(static_cast<size_t>(N));
    // Per-cell minimization at a fixed multiplier; ties go to the sloped
    // branch, which keeps the selection monotone in rho.
    auto height_at = [&](double lambda) {
        double height = 0.0;
        for (int j = 0; j < N; ++j) {
            const double k = sloped_branch_argmin(rho[j], lambda);
            const double cost0 = rho[j];
            const double costk = rho[j] / (1.0 + k * k) + lambda * k;
            slopes[j] = cost0 < costk ? 0.0 : k;
            height += slopes[j] * dr;
        }
        return height;
    };

    double lam_lo = 1e-12, lam_hi = 1.0;
    while (height_at(lam_hi) > M) lam_hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lam_lo + lam_hi);
        (height_at(mid) > M ? lam_lo : lam_hi) = mid;
    }
    const double lambda = 0.5 * (lam_lo + lam_hi);
    const double height = height_at(lambda);

    // Primal profile: integrate slopes from the rim, then scale the leftover
    // budget mismatch away (it is at bisection resolution).
    const double scale = height > 0 ? M / height : 1.0;
    out.phi.assign(static_cast<size_t>(N) + 1, 0.0);
    for (int j = N - 1; j >= 0; --j) out.phi[j] = out.phi[j + 1] + slopes[j] * scale * dr;
    out.resistance = 0.0;
    for (int j = 0; j < N; ++j) {
        const double k = slopes[j] * scale;
        out.resistance += m[j] / (1.0 + k * k);
    }

    double lagrangian = -lambda * M;
    for (int j = 0; j < N; ++j) {
        const double k = slopes[j];
        lagrangian += m[j] / (1.0 + k * k) + lambda * k * dr;
    }
    out.dual_bound = lagrangian;
    out.gap_rel = (out.resistance - out.dual_bound) / out.resistance;
    return out;
}

std::vector<Vec3> halfspace_vertices_bruteforce(const std::vector<Vec3>& normals,
                                                const std::vector<double>& offsets, double tol) {
    const int n = static_cast<int>(normals.size());
    std::vector<Vec3> verts;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Mat3 A;
                A.row(0) = normals[i].transpose();
                A.row(1) = normals[j].transpose();
                A.row(2) = normals[k].transpose();
                if (std::abs(A.determinant()) < 1e-12) continue;
                const Vec3 x = A.fullPivLu().solve(Vec3(offsets[i], offsets[j], offsets[k]));
                bool inside = true;
                for (int q = 0; q < n && inside; ++q)
                    inside = normals[q].dot(x) <= offsets[q] + tol;
                if (!inside) continue;
                bool fresh = true;
                for (const Vec3& v : verts) fresh &= (v - x).norm() > 10 * tol;
                if (fresh) verts.push_back(x);
            }
    return verts;
}

double max_support_of_points(const std::vector<Vec3>& pts, const Vec3& dir) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec3& p : pts) best = std::max(best, dir.dot(p));
    return best;
}

double support_mismatch(const Polytope& P, const std::function<double(const Vec3&)>& expected,
                        int n_dirs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < n_dirs; ++i) {
        const double x = gauss(rng);
        const double y = gauss(rng);
        const double z = gauss(rng);
        Vec3 d(x, y, z);
        if (d.norm() < 1e-9) continue;
        d.normalize();
        worst = std::max(worst, std::abs(support(P, d) - expected(d)));
    }
    return worst;
}

double vertex_set_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    auto one_way = [](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
        double worst = 0.0;
        for (const Vec3& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec3& q : to) best = std::min(best, (p - q).norm());
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_way(a, b), one_way(b, a));
}

Polytope make_cube() {
    std::vector<Vec3> pts;
    for (int i = 0; i < 8; ++i)
        pts.emplace_back(static_cast<double>(i & 1), static_cast<double>((i >> 1) & 1),
                         static_cast<double>((i >> 2) & 1));
    return hull3d(pts);
}

Polytope make_tetra() {
    return hull3d({Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)});
}

Polytope random_polytope(std::uint64_t seed, int n_points) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec3> pts;
    while (static_cast<int>(pts.size()) < n_points) {
        const double x = gauss(rng);
        const double y = gauss(rng);
        const double z = gauss(rng);
        Vec3 v(x, y, z);
        if (v.norm() < 1e-6) continue;
        pts.push_back(v / v.norm());
    }
    return hull3d(pts);
}

Polytope make_frustum() {
    std::vector<Vec3> pts;
    for (int sx : {-1, 1})
        for (int sy : {-1, 1}) {
            pts.emplace_back(sx, sy, 0.0);
            pts.emplace_back(0.5 * sx, 0.5 * sy, 1.0);
        }
    return hull3d(pts);
}

Vec3 frustum_tip() { return {0.0, 0.0, 2.0}; }

Vec3 outside_apex(const Polytope& P, std::uint64_t seed, double factor) {
    const Vec3 c = P.vertex_mean();
    double radius = 0.0;
    for (const Vec3& v : P.vertices) radius = std::max(radius, (v - c).norm());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 64; ++attempt) {
        const double x = gauss(rng);
        const double y = gauss(rng);
        const double z = gauss(rng);
        Vec3 d(x, y, z);
        if (d.norm() < 1e-6) continue;
        const Vec3 apex = c + factor * radius * d / d.norm();
        if (classify_point(P, apex).cls == BoundaryPointClass::Outside) return apex;
    }
    fail(ErrorKind::NoValidPoint, "no outside apex for this seed");
}

NoseFamily cube_two_apex_family() {
    NoseFamily fam;
    fam.C = make_cube();
    fam.apexes = {Vec3(0.5, 0.5, 1.75), Vec3(0.5, 0.5, -0.75)};
    validate_family(fam);
    return fam;
}

namespace {

std::set<std::pair<int, int>> undirected_sil(const NoseDecomposition& dec) {
    std::set<std::pair<int, int>> out;
    for (const auto& [u, w] : dec.silhouette) out.insert({std::min(u, w), std::max(u, w)});
    return out;
}

}  // namespace

NoseFamily random_two_apex_family(std::uint64_t seed) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const Polytope C = random_polytope(seed + 101 * attempt);
        std::mt19937_64 rng(seed * 7919 + attempt);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double x = gauss(rng);
        const double y = gauss(rng);
        const double z = gauss(rng);
        Vec3 d(x, y, z);
        if (d.norm() < 1e-6) continue;
        d.normalize();
        const Vec3 c = C.vertex_mean();
        double radius = 0.0;
        for (const Vec3& v : C.vertices) radius = std::max(radius, (v - c).norm());
        NoseFamily fam;
        fam.C = C;
        fam.apexes = {c + 1.7 * radius * d, c - 1.7 * radius * d};
        try {
            validate_family(fam);
            const auto d0 = decompose(C, fam.apexes[0]);
            const auto d1 = decompose(C, fam.apexes[1]);
            std::set<int> near0(d0.near_facets.begin(), d0.near_facets.end());
            bool overlap = false;
            for (int f : d1.near_facets) overlap |= near0.count(f) > 0;
            const auto s0 = undirected_sil(d0);
            for (const auto& e : undirected_sil(d1)) overlap |= s0.count(e) > 0;
            if (overlap) continue;
            if (check_cone_disjointness(fam, 12, seed + attempt).violations != 0) continue;
            return fam;
        } catch (const Error&) {
            continue;
        }
    }
    fail(ErrorKind::NoValidPoint, "no admissible two-apex instance for this seed");
}

}  // namespace resist::testing
