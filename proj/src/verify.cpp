#include "resist/verify.hpp"

#include <algorithm>
#include <cmath>

namespace resist {

namespace {

Vec3 graph_normal(const Vec2& grad) { return Vec3(-grad.x(), -grad.y(), 1.0).normalized(); }

double simpson(const std::function<double(double)>& fn, double lo, double hi, int n) {
    if (n % 2 == 0) ++n;
    const double h = (hi - lo) / (n - 1);
    double acc = fn(lo) + fn(hi);
    for (int i = 1; i < n - 1; ++i) acc += fn(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

P2Report verify_P2(const HeightField& f, double delta) {
    require(delta > 0 && delta < 0.5, ErrorKind::InvalidArgument, "verify_P2: delta in (0, 0.5)");
    P2Report rep;
    rep.delta = delta;
    rep.total_triangles = static_cast<int>(f.mesh.triangles.size());
    for (int t = 0; t < rep.total_triangles; ++t) {
        const double slope = tri_gradient(f.mesh, f.u, t).norm();
        if (slope > delta && slope < 1.0 - delta) rep.violating_triangles.push_back(t);
    }
    rep.violating_fraction =
        rep.total_triangles ? static_cast<double>(rep.violating_triangles.size()) / rep.total_triangles
                            : 0.0;
    rep.wording_note =
        "slope dichotomy tested as: |grad u| = 0 or |grad u| >= 1, i.e. no gradient "
        "magnitudes strictly inside (delta, 1-delta); the printed source statement "
        "('>= 1 or = 1') is redundant as written and was not decided silently";
    return rep;
}

P4P5Report verify_P4_P5(const HeightField& f) {
    P4P5Report rep;
    rep.tau_top = 1e-6 * f.M;
    rep.mesh_spacing = f.mesh.max_edge();
    std::vector<int> top;
    for (Eigen::Index v = 0; v < f.u.size(); ++v)
        if (f.u[v] >= f.M - rep.tau_top) top.push_back(static_cast<int>(v));
    rep.top_vertex_count = static_cast<int>(top.size());
    rep.top_diameter = 0.0;
    for (size_t i = 0; i < top.size(); ++i)
        for (size_t j = i + 1; j < top.size(); ++j)
            rep.top_diameter = std::max(
                rep.top_diameter, (f.mesh.vertices[top[i]] - f.mesh.vertices[top[j]]).norm());
    std::vector<char> in_top(f.u.size(), 0);
    for (int v : top) in_top[v] = 1;
    rep.top_area = 0.0;
    for (int t = 0; t < static_cast<int>(f.mesh.triangles.size()); ++t) {
        const auto& tr = f.mesh.triangles[t];
        if (in_top[tr[0]] && in_top[tr[1]] && in_top[tr[2]]) rep.top_area += tri_area(f.mesh, t);
    }
    rep.boundary_max_abs = 0.0;
    for (size_t v = 0; v < f.mesh.vertices.size(); ++v)
        if (f.mesh.boundary[v])
            rep.boundary_max_abs =
                std::max(rep.boundary_max_abs, std::abs(f.u[static_cast<Eigen::Index>(v)]));
    return rep;
}

std::vector<int> crease_edges(const TriMesh2& mesh, const Eigen::VectorXd& u,
                              const std::vector<MeshEdge>& edges, const Tolerances& tol) {
    std::vector<int> out;
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        if (edges[e].t1 < 0) continue;
        const Vec3 n0 = graph_normal(tri_gradient(mesh, u, edges[e].t0));
        const Vec3 n1 = graph_normal(tri_gradient(mesh, u, edges[e].t1));
        if (angle_between(n0, n1) > tol.crease_angle) out.push_back(e);
    }
    return out;
}

std::optional<LocalQuadratic> fit_quadratic(const TriMesh2& mesh, const Eigen::VectorXd& u, int v,
                                            const std::vector<std::vector<int>>* neighbors) {
    std::vector<std::vector<int>> local;
    if (!neighbors) {
        local = mesh.vertex_neighbors();
        neighbors = &local;
    }
    const auto& nb = *neighbors;
    std::vector<int> ring;
    std::vector<char> seen(mesh.vertices.size(), 0);
    seen[v] = 1;
    for (int w : nb[v])
        if (!seen[w]) {
            seen[w] = 1;
            ring.push_back(w);
        }
    const size_t one_ring = ring.size();
    for (size_t i = 0; i < one_ring; ++i)
        for (int w : nb[ring[i]])
            if (!seen[w]) {
                seen[w] = 1;
                ring.push_back(w);
            }
    if (ring.size() < 6) return std::nullopt;

    Eigen::MatrixXd A(ring.size() + 1, 6);
    Eigen::VectorXd rhs(ring.size() + 1);
    const Vec2 origin = mesh.vertices[v];
    A.row(0) << 1, 0, 0, 0, 0, 0;
    rhs[0] = u[v];
    for (size_t i = 0; i < ring.size(); ++i) {
        const Vec2 d = mesh.vertices[ring[i]] - origin;
        A.row(static_cast<Eigen::Index>(i + 1)) << 1, d.x(), d.y(), 0.5 * d.x() * d.x(),
            d.x() * d.y(), 0.5 * d.y() * d.y();
        rhs[static_cast<Eigen::Index>(i + 1)] = u[ring[i]];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < 6) return std::nullopt;
    const Eigen::VectorXd c = qr.solve(rhs);
    LocalQuadratic fit;
    fit.grad = Vec2(c[1], c[2]);
    fit.hess << c[3], c[4], c[4], c[5];
    return fit;
}

DetD2Report verify_detD2(const HeightField& f, double margin, const Tolerances& tol) {
    DetD2Report rep;
    rep.margin = margin;
    rep.tested = rep.excluded_boundary = rep.excluded_top = rep.excluded_crease =
        rep.excluded_rank = 0;

    const double tau_top = 1e-6 * f.M;
    std::vector<Vec2> top_pts;
    for (Eigen::Index v = 0; v < f.u.size(); ++v)
        if (f.u[v] >= f.M - tau_top) top_pts.push_back(f.mesh.vertices[v]);

    const auto edges = mesh_edges(f.mesh);
    std::vector<Vec2> crease_pts;
    for (int e : crease_edges(f.mesh, f.u, edges, tol)) {
        crease_pts.push_back(f.mesh.vertices[edges[e].a]);
        crease_pts.push_back(f.mesh.vertices[edges[e].b]);
    }

    auto near_any = [&](const Vec2& p, const std::vector<Vec2>& pts) {
        for (const Vec2& q : pts)
            if ((p - q).norm() <= margin) return true;
        return false;
    };

    const auto nb = f.mesh.vertex_neighbors();
    for (int v = 0; v < static_cast<int>(f.mesh.vertices.size()); ++v) {
        const Vec2& p = f.mesh.vertices[v];
        if (f.mesh.boundary[v] || polygon_inward_margin(f.mesh.omega, p) < margin) {
            ++rep.excluded_boundary;
            continue;
        }
        if (f.u[v] >= f.M - tau_top || near_any(p, top_pts)) {
            ++rep.excluded_top;
            continue;
        }
        if (near_any(p, crease_pts)) {
            ++rep.excluded_crease;
            continue;
        }
        const auto fit = fit_quadratic(f.mesh, f.u, v, &nb);
        if (!fit) {
            ++rep.excluded_rank;
            continue;
        }
        ++rep.tested;
        rep.tested_vertices.push_back(v);
        rep.abs_det.push_back(std::abs(fit->hess.determinant()));
    }
    if (rep.abs_det.empty()) {
        rep.median_abs_det = 0.0;
    } else {
        std::vector<double> sorted = rep.abs_det;
        const size_t mid = sorted.size() / 2;
        std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
        rep.median_abs_det = sorted[mid];
    }
    return rep;
}

BumpProfile default_bump() {
    BumpProfile bump;
    bump.value = [](double t) {
        if (std::abs(t) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - t * t));
    };
    bump.deriv = [](double t) {
        if (std::abs(t) >= 1.0) return 0.0;
        const double s = 1.0 - t * t;
        return std::exp(-1.0 / s) * (-2.0 * t) / (s * s);
    };
    return bump;
}

SecondVariationReport second_variation_probe(const PressureLaw& law, const HeightField& f,
                                             const Vec2& x0, const std::vector<double>& taus,
                                             double support_radius, const BumpProfile& bump,
                                             const Tolerances& tol) {
    require(!taus.empty(), ErrorKind::InvalidArgument, "probe: empty tau schedule");
    require(support_radius > 0, ErrorKind::InvalidArgument, "probe: support radius must be positive");
    const double rho = support_radius;
    const double reach = rho * std::sqrt(2.0);  // circumradius of the rotated support square

    SecondVariationReport rep;
    rep.x0 = x0;
    require(polygon_inward_margin(f.mesh.omega, x0) >= reach, ErrorKind::TooCloseToBound,
            "probe: support square leaves the domain");

    // The perturbation must stay admissible: strictly between the bounds on
    // the whole support, and no crease inside it (else grad u jumps).
    const double bound_gap = 1e-7 * f.M;
    for (size_t v = 0; v < f.mesh.vertices.size(); ++v) {
        if ((f.mesh.vertices[v] - x0).norm() > reach + f.mesh.max_edge()) continue;
        const double val = f.u[static_cast<Eigen::Index>(v)];
        require(val > bound_gap && val < f.M - bound_gap, ErrorKind::TooCloseToBound,
                "probe: field touches a bound inside the support");
    }
    const auto edges = mesh_edges(f.mesh);
    for (int e : crease_edges(f.mesh, f.u, edges, tol)) {
        const Vec2 mid = 0.5 * (f.mesh.vertices[edges[e].a] + f.mesh.vertices[edges[e].b]);
        require((mid - x0).norm() > reach, ErrorKind::CreaseDetected,
                "probe: crease inside the support");
    }

    int v0 = 0;
    double dmin = std::numeric_limits<double>::max();
    for (int v = 0; v < static_cast<int>(f.mesh.vertices.size()); ++v) {
        const double d = (f.mesh.vertices[v] - x0).norm();
        if (d < dmin) {
            dmin = d;
            v0 = v;
        }
    }
    rep.nearest_vertex = v0;
    const auto fit = fit_quadratic(f.mesh, f.u, v0);
    require(fit.has_value(), ErrorKind::DegenerateInput, "probe: rank-deficient Hessian stencil");
    rep.grad = fit->grad;
    rep.D2u = fit->hess;

    // D2g by central differences around the local gradient.
    const double hg = 1e-4 * (1.0 + rep.grad.norm());
    const double X = rep.grad.x(), Y = rep.grad.y();
    auto g = [&](double a, double b) { return law.g(a, b); };
    Mat2 D2g;
    D2g(0, 0) = (g(X + hg, Y) - 2.0 * g(X, Y) + g(X - hg, Y)) / (hg * hg);
    D2g(1, 1) = (g(X, Y + hg) - 2.0 * g(X, Y) + g(X, Y - hg)) / (hg * hg);
    D2g(0, 1) = D2g(1, 0) =
        (g(X + hg, Y + hg) - g(X + hg, Y - hg) - g(X - hg, Y + hg) + g(X - hg, Y - hg)) /
        (4.0 * hg * hg);
    rep.D2g = D2g;

    Eigen::SelfAdjointEigenSolver<Mat2> eig(D2g);
    const double lambda2 = eig.eigenvalues()[0];  // most negative
    const double lambda1 = eig.eigenvalues()[1];
    rep.a = lambda1;
    rep.b = -lambda2;
    rep.rotation.col(0) = eig.eigenvectors().col(1);  // chi_1
    rep.rotation.col(1) = eig.eigenvectors().col(0);  // chi_2, the oscillation direction

    auto gam = [&](double chi) { return bump.value(chi / rho); };
    auto dgam = [&](double chi) { return bump.deriv(chi / rho) / rho; };
    const double int_gam2 = simpson([&](double t) { return gam(t) * gam(t); }, -rho, rho, 4001);
    const double int_dgam2 = simpson([&](double t) { return dgam(t) * dgam(t); }, -rho, rho, 4001);

    rep.taus = taus;
    for (double tau : taus) {
        require(tau > 0, ErrorKind::InvalidArgument, "probe: tau must be positive");
        const int n = std::min(200001, std::max(4001, static_cast<int>(80.0 * rho / tau)));
        const double osc2 = simpson(
            [&](double t) {
                const double s = std::sin(t / tau);
                return gam(t) * gam(t) * s * s;
            },
            -rho, rho, n);
        const double dosc2 = simpson(
            [&](double t) {
                const double d = dgam(t) * std::sin(t / tau) + gam(t) * std::cos(t / tau) / tau;
                return d * d;
            },
            -rho, rho, n);
        const double I1 = int_dgam2 * osc2;   // integral of (psi_chi1)^2
        const double I2 = int_gam2 * dosc2;   // integral of (psi_chi2)^2
        rep.I1.push_back(I1);
        rep.I2.push_back(I2);
        rep.Q.push_back(rep.a * I1 - rep.b * I2);
    }

    // Growth diagnostics over the asymptotic end of the schedule. The 1/tau^2
    // regime needs several oscillations inside the support, so entries with
    // tau above rho/3 are warm-up and excluded from the fit.
    std::vector<double> lx, ly, i1_sub;
    for (size_t i = 0; i < taus.size(); ++i)
        if (taus[i] <= rho / 3.0 + 1e-12) {
            lx.push_back(std::log(taus[i]));
            ly.push_back(std::log(rep.I2[i]));
            i1_sub.push_back(rep.I1[i]);
        }
    if (lx.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        const double n = static_cast<double>(lx.size());
        rep.loglog_slope_I2 = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    } else {
        rep.loglog_slope_I2 = 0.0;
    }
    if (i1_sub.empty()) i1_sub = rep.I1;
    const auto [it_min, it_max] = std::minmax_element(i1_sub.begin(), i1_sub.end());
    rep.I1_spread = *it_min > 0 ? *it_max / *it_min : std::numeric_limits<double>::infinity();

    Eigen::SelfAdjointEigenSolver<Mat2> conc(-rep.D2u);
    rep.concavity_definite =
        conc.eigenvalues()[0] > 1e-9 * (1.0 + std::abs(conc.eigenvalues()[1]));
    const double qmin = *std::min_element(rep.Q.begin(), rep.Q.end());
    rep.verdict = (rep.concavity_definite && qmin < 0.0) ? ProbeVerdict::CertifiedNonoptimal
                                                         : ProbeVerdict::Inconclusive;
    return rep;
}

}  // namespace resist
