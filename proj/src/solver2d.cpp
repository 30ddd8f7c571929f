#include "resist/solver2d.hpp"

#include <algorithm>
#include <cmath>

namespace resist {

namespace {

// dF/du_v for F = sum_T g(grad u|_T) area_T; Dg estimated by central
// differences at each triangle gradient.
Eigen::VectorXd objective_gradient(const PressureLaw& law, const HeightField& f) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(f.u.size());
    for (int t = 0; t < static_cast<int>(f.mesh.triangles.size()); ++t) {
        const auto& tr = f.mesh.triangles[t];
        const Vec2 g = tri_gradient(f.mesh, f.u, t);
        const double area = tri_area(f.mesh, t);
        const double step = 1e-6 * (1.0 + g.norm());
        const Vec2 Dg((law.g(g.x() + step, g.y()) - law.g(g.x() - step, g.y())) / (2.0 * step),
                      (law.g(g.x(), g.y() + step) - law.g(g.x(), g.y() - step)) / (2.0 * step));
        for (int k = 0; k < 3; ++k) {
            // gradient of the P1 hat of vertex tr[k]: rot90(opposite edge)/(2A)
            const Vec2 e = f.mesh.vertices[tr[(k + 2) % 3]] - f.mesh.vertices[tr[(k + 1) % 3]];
            const Vec2 hat(-e.y() / (2.0 * area), e.x() / (2.0 * area));
            grad[tr[k]] += area * Dg.dot(hat);
        }
    }
    return grad;
}

}  // namespace

void descend_field(const PressureLaw& law, HeightField& f, const Solve2DOptions& opts,
                   int* iter_counter, std::mt19937_64& rng) {
    auto log = [&](double obj, const char* step) {
        if (opts.trace) opts.trace->push_back({(*iter_counter)++, obj, step});
    };
    double F = resistance_2d_unchecked(law, f);
    log(F, "start");

    if (opts.gradient_moves) {
        double eta = 0.25 * f.M;
        int rejects = 0;
        for (int it = 0; it < opts.max_gradient_iters && rejects < 30; ++it) {
            const Eigen::VectorXd grad = objective_gradient(law, f);
            const double gmax = grad.cwiseAbs().maxCoeff();
            if (gmax == 0.0) break;
            bool accepted = false;
            for (int bt = 0; bt < 30; ++bt) {
                const Eigen::VectorXd raw = f.u - (eta / gmax) * grad;
                HeightField trial = project_concave(f.mesh, raw, f.M);
                const double Ft = resistance_2d_unchecked(law, trial);
                if (Ft < F) {
                    f.u = trial.u;
                    F = Ft;
                    eta = std::min(eta * 1.5, 0.5 * f.M);
                    accepted = true;
                    break;
                }
                eta *= 0.5;
            }
            if (accepted) {
                rejects = 0;
                log(F, "grad");
            } else {
                ++rejects;
            }
            if (eta < 1e-12 * f.M) break;
        }
    }

    if (opts.apex_moves) {
        std::vector<int> interior;
        for (size_t v = 0; v < f.mesh.vertices.size(); ++v)
            if (!f.mesh.boundary[v]) interior.push_back(static_cast<int>(v));
        std::vector<int> rim;
        for (size_t v = 0; v < f.mesh.vertices.size(); ++v)
            if (f.mesh.boundary[v]) rim.push_back(static_cast<int>(v));
        std::uniform_int_distribution<size_t> pick_interior(0, interior.empty() ? 0 : interior.size() - 1);
        std::uniform_int_distribution<size_t> pick_rim(0, rim.empty() ? 0 : rim.size() - 1);

        double dh = 0.25 * f.M;
        for (int round = 0; round < opts.apex_rounds; ++round) {
            bool any = false;
            for (int c = 0; c < opts.apex_candidates; ++c) {
                // Alternate apex lifts inside and rim drops; both are followed
                // by reprojection, so each proposal is a nose-style cone edit.
                const bool lift = (c % 2 == 0) || rim.empty();
                const int v = lift ? (interior.empty() ? -1 : interior[pick_interior(rng)])
                                   : rim[pick_rim(rng)];
                if (v < 0) continue;
                Eigen::VectorXd raw = f.u;
                raw[v] += lift ? dh : -dh;
                // Projection restores concavity either way: a lift grows a
                // cone over the touched vertex, a drop sticks only where the
                // vertex was extreme.
                HeightField trial = project_concave(f.mesh, raw, f.M);
                const double Ft = resistance_2d_unchecked(law, trial);
                if (Ft < F) {
                    f.u = trial.u;
                    F = Ft;
                    any = true;
                    log(F, lift ? "apex" : "rim");
                }
            }
            if (!any) dh *= 0.6;
            if (dh < 1e-9 * f.M) break;
        }
    }
    log(F, "done");
}

HeightField solve_2d(const PressureLaw& law, const std::vector<Vec2>& omega, double M, double h,
                     const Solve2DOptions& opts) {
    require(M > 0, ErrorKind::InvalidArgument, "solve_2d: M must be positive");
    const TriMesh2 mesh = mesh_polygon(omega, h);

    Vec2 centroid = Vec2::Zero();
    for (const Vec2& v : mesh.omega) centroid += v;
    centroid /= static_cast<double>(mesh.omega.size());
    double L = 0.0;
    for (const Vec2& v : mesh.omega) L = std::max(L, (v - centroid).norm());

    // Radial restriction on this very mesh; it doubles as the yardstick the
    // 2-D result must not lose to.
    SolveRadialOptions ropts;
    ropts.multistart = 3;
    ropts.seed = opts.seed;
    ropts.max_gradient_iters = 200;
    const RadialProfile radial = solve_radial(M, L, 512, ropts);
    auto radial_height = [&](const Vec2& p) {
        const double r = (p - centroid).norm();
        const double x = std::clamp(r / L, 0.0, 1.0) * radial.cells();
        const int j = std::min(static_cast<int>(x), radial.cells() - 1);
        return radial.phi[j] + (x - j) * (radial.phi[j + 1] - radial.phi[j]);
    };

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto make_seed = [&](int which) {
        Eigen::VectorXd raw(mesh.vertices.size());
        for (size_t v = 0; v < mesh.vertices.size(); ++v) {
            const Vec2& p = mesh.vertices[v];
            double val = 0.0;
            switch (which) {
                case 0: val = radial_height(p); break;
                case 1: val = M * (1.0 - (p - centroid).norm() / L); break;
                case 2: val = 0.0; break;
                case 3: val = M; break;
                default: val = M * uni(rng); break;
            }
            raw[static_cast<Eigen::Index>(v)] = val;
        }
        return project_concave(mesh, raw, M);
    };

    HeightField best;
    double best_F = std::numeric_limits<double>::max();
    int iter_counter = 0;
    for (int s = 0; s < std::max(1, opts.multistart); ++s) {
        HeightField f = make_seed(s);
        descend_field(law, f, opts, &iter_counter, rng);
        const double F = resistance_2d_unchecked(law, f);
        const bool tie = std::abs(F - best_F) <= 1e-12 * std::max(1.0, std::abs(best_F));
        if (!tie && F < best_F) {
            best = f;
            best_F = F;
        } else if (tie && std::lexicographical_compare(f.u.data(), f.u.data() + f.u.size(),
                                                       best.u.data(),
                                                       best.u.data() + best.u.size())) {
            best = f;
            best_F = std::min(best_F, F);
        }
    }
    validate_field(best);
    return best;
}

}  // namespace resist
