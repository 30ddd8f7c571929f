#include "resist/nose_stretch.hpp"

#include "resist/distance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace resist {

namespace {

// Directed edge (u, w) -> owning facet, for silhouette extraction.
std::map<std::pair<int, int>, int> directed_edge_owners(const Polytope& P) {
    std::map<std::pair<int, int>, int> own;
    for (int fi = 0; fi < static_cast<int>(P.facets.size()); ++fi) {
        const auto& loop = P.facets[fi].loop;
        const int m = static_cast<int>(loop.size());
        for (int k = 0; k < m; ++k) own[{loop[k], loop[(k + 1) % m]}] = fi;
    }
    return own;
}

// Margin of the obstacle set inside the dilated near halfspaces. Negative-s
// admissibility requires that no obstacle is cut off by any dilated near
// plane. The margin is affine and decreasing in the dilation ratio, so the
// first touch is the last admissible ratio and bisection on it is sound; a
// distance to the bounded patch would turn positive again after the sweep
// passes an obstacle.
double obstacle_cut_margin(const Polytope& C, const NoseDecomposition& dec, double ratio,
                           const ObstacleSet& obstacles) {
    double margin = std::numeric_limits<double>::max();
    auto visit = [&](const Vec3& p) {
        for (int fi : dec.near_facets) {
            const Facet& f = C.facets[fi];
            const double off = ratio * f.offset + (1.0 - ratio) * f.normal.dot(dec.apex);
            margin = std::min(margin, off - f.normal.dot(p));
        }
    };
    for (const Vec3& p : obstacles.points) visit(p);
    for (const Segment3& s : obstacles.segments) {
        visit(s.a);
        visit(s.b);
    }
    return margin;
}

// The lemma hypothesis behind the negative branch: every obstacle point must
// see the interior of C past the apex. Segments are probed at their endpoints
// and midpoint.
bool obstacles_see_interior(const Polytope& C, const Vec3& apex, const ObstacleSet& obstacles,
                            const Tolerances& tol) {
    auto ok = [&](const Vec3& xi) { return segment_meets_interior(C, {apex, xi}, tol); };
    for (const Vec3& p : obstacles.points)
        if (!ok(p)) return false;
    for (const Segment3& s : obstacles.segments)
        if (!ok(s.a) || !ok(s.b) || !ok(Vec3(0.5 * (s.a + s.b)))) return false;
    return true;
}

}  // namespace

NoseDecomposition decompose(const Polytope& C, const Vec3& apex, const Tolerances& tol) {
    require(classify_point(C, apex, tol).cls == BoundaryPointClass::Outside, ErrorKind::ApexInside,
            "decompose: apex is not strictly outside the body");
    const double strict = tol.strict_off * C.diameter();

    NoseDecomposition dec;
    dec.apex = apex;
    for (int fi = 0; fi < static_cast<int>(C.facets.size()); ++fi) {
        const Facet& f = C.facets[fi];
        // Tangent planes (apex on the plane) go to the far side; their facet
        // area must not move, only the cone over their rim.
        if (f.normal.dot(apex) - f.offset > strict)
            dec.near_facets.push_back(fi);
        else
            dec.far_facets.push_back(fi);
    }
    require(!dec.near_facets.empty(), ErrorKind::ApexInside,
            "decompose: no facet is visible from the apex");

    const auto owner = directed_edge_owners(C);
    std::vector<char> near_flag(C.facets.size(), 0);
    for (int fi : dec.near_facets) near_flag[fi] = 1;
    std::vector<MeasureAtom> cone_atoms;
    for (int fi : dec.near_facets) {
        const auto& loop = C.facets[fi].loop;
        const int m = static_cast<int>(loop.size());
        for (int k = 0; k < m; ++k) {
            const int u = loop[k], w = loop[(k + 1) % m];
            const int other = owner.at({w, u});
            if (near_flag[other]) continue;
            dec.silhouette.push_back({u, w});
            // Triangle (apex, u, w): counterclockwise from outside because the
            // near facet loop runs counterclockwise.
            const Vec3 a = C.vertices[u], b = C.vertices[w];
            const Vec3 av = 0.5 * (a - apex).cross(b - apex);
            dec.cone_triangles.push_back({apex, a, b});
            if (av.norm() > 0) cone_atoms.push_back({av.normalized(), av.norm()});
        }
    }
    require(!dec.silhouette.empty(), ErrorKind::DegenerateInput,
            "decompose: empty silhouette (inconsistent facet classification)");

    dec.near_measure = measure_of(C, dec.near_facets, 1.0, tol);
    dec.cone_measure = merge_atoms(cone_atoms, tol);
    dec.nu0 = measure_linear_combine({1.0, -1.0}, {dec.cone_measure, dec.near_measure}, tol);
    dec.near_area = dec.near_measure.total_weight();
    dec.cone_area = dec.cone_measure.total_weight();
    return dec;
}

Polytope stretch(const Polytope& C, const Vec3& apex, double s, const ObstacleSet& obstacles,
                 const Tolerances& tol) {
    require(s <= 1.0 + 1e-12 && s >= -0.5 - 1e-12, ErrorKind::InvalidArgument,
            "stretch: s must lie in [-0.5, 1]");
    const NoseDecomposition dec = decompose(C, apex, tol);

    if (s >= 1.0 - 1e-12) {
        std::vector<Vec3> pts = C.vertices;
        pts.push_back(apex);
        return hull3d(pts, tol);
    }

    const double ratio = std::sqrt(1.0 - s);
    if (s < 0) {
        const double strict = tol.strict_off * C.diameter();
        const bool admissible = obstacles_see_interior(C, apex, obstacles, tol) &&
                                obstacle_cut_margin(C, dec, ratio, obstacles) > strict;
        require(admissible, ErrorKind::ObstacleHit,
                "stretch: dilated near boundary is not clear of the obstacle set");
    }

    // H-representation: Conv(C u {apex}) contributes the far and tangent-cone
    // planes; the near planes are dilated about the apex.
    std::vector<Vec3> pts = C.vertices;
    pts.push_back(apex);
    const Polytope Cminus = hull3d(pts, tol);

    std::vector<Vec3> normals;
    std::vector<double> offsets;
    for (const Facet& f : Cminus.facets) {
        normals.push_back(f.normal);
        offsets.push_back(f.offset);
    }
    for (int fi : dec.near_facets) {
        const Facet& f = C.facets[fi];
        normals.push_back(f.normal);
        offsets.push_back(ratio * f.offset + (1.0 - ratio) * f.normal.dot(apex));
    }
    return intersect_halfspaces(normals, offsets, tol);
}

double negative_range(const Polytope& C, const Vec3& apex, const ObstacleSet& obstacles,
                      const Tolerances& tol) {
    if (!obstacles_see_interior(C, apex, obstacles, tol)) return 0.0;
    const NoseDecomposition dec = decompose(C, apex, tol);
    const double strict = tol.strict_off * C.diameter();
    auto clear = [&](double s) {
        return obstacle_cut_margin(C, dec, std::sqrt(1.0 - s), obstacles) > strict;
    };
    double bad = -0.5;
    if (clear(bad)) return bad;
    double good = 0.0;
    while (good - bad > 1e-10) {
        const double mid = 0.5 * (good + bad);
        (clear(mid) ? good : bad) = mid;
    }
    return good;
}

std::vector<FamilySample> resistance_along_family(const Polytope& C, const Vec3& apex,
                                                  const PressureLaw& law,
                                                  const std::vector<double>& s_grid,
                                                  const Tolerances& tol) {
    const NoseDecomposition dec = decompose(C, apex, tol);
    std::vector<FamilySample> out;
    out.reserve(s_grid.size());
    for (double s : s_grid) {
        const Polytope Cs = stretch(C, apex, s, {}, tol);
        const DiscreteSurfaceMeasure nu = measure_of(Cs, tol);
        FamilySample row;
        row.s = s;
        row.F = eval_functional(law, nu);
        row.area_near = (1.0 - s) * dec.near_area;
        row.area_V = s * dec.cone_area;
        row.closure = closure_defect(nu);
        out.push_back(row);
    }
    return out;
}

FamilyMeasureReport family_measure_check(const Polytope& C, const Vec3& apex,
                                         const std::vector<double>& s_grid,
                                         const Tolerances& tol) {
    const NoseDecomposition dec = decompose(C, apex, tol);
    const DiscreteSurfaceMeasure nuC = measure_of(C, tol);
    const double area = C.surface_area();
    FamilyMeasureReport rep;
    for (double s : s_grid) {
        const DiscreteSurfaceMeasure lhs = measure_of(stretch(C, apex, s, {}, tol), tol);
        const DiscreteSurfaceMeasure rhs = measure_linear_combine({1.0, s}, {nuC, dec.nu0}, tol);
        rep.max_atom_dev = std::max(rep.max_atom_dev, max_atom_deviation(lhs, rhs, tol));
    }
    rep.max_atom_dev_rel = rep.max_atom_dev / area;
    return rep;
}

DerivativeReport stretch_derivative(const Polytope& C, const Vec3& apex, const PressureLaw& law,
                                    double h, const ObstacleSet& obstacles, const Tolerances& tol) {
    require(h > 0 && 2.0 * h < 0.5, ErrorKind::InvalidArgument,
            "stretch_derivative: step out of range");
    const NoseDecomposition dec = decompose(C, apex, tol);
    DerivativeReport rep;
    rep.h = h;
    rep.analytic = eval_functional(law, dec.cone_measure) - eval_functional(law, dec.near_measure);
    rep.s_min = negative_range(C, apex, obstacles, tol);
    rep.two_sided = rep.s_min <= -2.0 * h;

    auto F = [&](double s) {
        return eval_functional(law, measure_of(stretch(C, apex, s, obstacles, tol), tol));
    };
    if (rep.two_sided) {
        // Five-point central stencil, O(h^4).
        rep.fd = (8.0 * (F(h) - F(-h)) - (F(2.0 * h) - F(-2.0 * h))) / (12.0 * h);
    } else {
        // One-sided second-order stencil on the affine branch.
        rep.fd = (-3.0 * F(0.0) + 4.0 * F(h) - F(2.0 * h)) / (2.0 * h);
    }
    return rep;
}

void validate_family(const NoseFamily& fam, const Tolerances& tol) {
    const double eps = tol.plane * fam.C.diameter();
    const int k = static_cast<int>(fam.apexes.size());
    require(k >= 1, ErrorKind::FamilyInvariantViolated, "family: no apexes");
    for (const Vec3& O : fam.apexes)
        require(classify_point(fam.C, O, tol).cls == BoundaryPointClass::Outside,
                ErrorKind::FamilyInvariantViolated, "family: apex not strictly outside the body");
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            require((fam.apexes[i] - fam.apexes[j]).norm() > eps,
                    ErrorKind::FamilyInvariantViolated, "family: coincident apexes");
            require(segment_meets_interior(fam.C, {fam.apexes[i], fam.apexes[j]}, tol),
                    ErrorKind::FamilyInvariantViolated,
                    "family: apex-apex segment misses the interior");
        }
}

Polytope multi_stretch(const NoseFamily& fam, const std::vector<double>& s_vec,
                       const Tolerances& tol) {
    validate_family(fam, tol);
    require(s_vec.size() == fam.apexes.size(), ErrorKind::InvalidArgument,
            "multi_stretch: one s per apex required");
    std::vector<Vec3> pts = fam.C.vertices;
    for (size_t i = 0; i < s_vec.size(); ++i) {
        require(s_vec[i] >= 0.0 && s_vec[i] <= 1.0, ErrorKind::InvalidArgument,
                "multi_stretch: s components must lie in [0, 1]");
        if (s_vec[i] == 0.0) continue;
        const Polytope Ci = stretch(fam.C, fam.apexes[i], s_vec[i], {}, tol);
        pts.insert(pts.end(), Ci.vertices.begin(), Ci.vertices.end());
    }
    return hull3d(pts, tol);
}

double multi_stretch_hull_gap(const NoseFamily& fam, const std::vector<double>& s_vec,
                              int n_samples, std::uint64_t seed, const Tolerances& tol) {
    const Polytope big = multi_stretch(fam, s_vec, tol);
    std::vector<Polytope> parts;
    for (size_t i = 0; i < s_vec.size(); ++i)
        parts.push_back(stretch(fam.C, fam.apexes[i], s_vec[i], {}, tol));

    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::max());
    Vec3 hi = Vec3::Constant(std::numeric_limits<double>::lowest());
    for (const Vec3& v : big.vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto excess = [](const Polytope& P, const Vec3& x) {
        double e = std::numeric_limits<double>::lowest();
        for (const Facet& f : P.facets) e = std::max(e, f.normal.dot(x) - f.offset);
        return e;
    };

    double worst = std::numeric_limits<double>::lowest();
    int accepted = 0;
    while (accepted < n_samples) {
        const Vec3 x(lo.x() + uni(rng) * (hi.x() - lo.x()), lo.y() + uni(rng) * (hi.y() - lo.y()),
                     lo.z() + uni(rng) * (hi.z() - lo.z()));
        if (excess(big, x) > 0.0) continue;  // outside the hull, rejected
        ++accepted;
        double gap = std::numeric_limits<double>::max();
        for (const Polytope& P : parts) gap = std::min(gap, excess(P, x));
        worst = std::max(worst, gap);
    }
    return worst;
}

ConeDisjointnessReport check_cone_disjointness(const NoseFamily& fam, int segments_per_apex,
                                               std::uint64_t seed, const Tolerances& tol) {
    validate_family(fam, tol);
    const Polytope& C = fam.C;
    const double strict = tol.strict_off * C.diameter();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    struct ApexSegments {
        std::vector<Segment3> near;     // [O, A], A on the near region
        std::vector<Segment3> tangent;  // [O, A'], A' on the silhouette
    };
    std::vector<ApexSegments> all;
    for (const Vec3& O : fam.apexes) {
        const NoseDecomposition dec = decompose(C, O, tol);
        ApexSegments segs;

        // Area-weighted sampling over the near region.
        std::vector<std::array<Vec3, 3>> tris;
        std::vector<double> cum;
        double acc = 0.0;
        for (int fi : dec.near_facets) {
            const auto& loop = C.facets[fi].loop;
            for (size_t k = 1; k + 1 < loop.size(); ++k) {
                const Vec3 a = C.vertices[loop[0]], b = C.vertices[loop[k]],
                           c = C.vertices[loop[k + 1]];
                tris.push_back({a, b, c});
                acc += 0.5 * (b - a).cross(c - a).norm();
                cum.push_back(acc);
            }
        }
        for (int k = 0; k < segments_per_apex; ++k) {
            const double pick = uni(rng) * acc;
            const size_t ti =
                std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin();
            const auto& t = tris[std::min(ti, tris.size() - 1)];
            double u = uni(rng), v = uni(rng);
            if (u + v > 1.0) {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            segs.near.push_back({O, t[0] + u * (t[1] - t[0]) + v * (t[2] - t[0])});
        }

        // Length-weighted sampling over the silhouette.
        std::vector<double> ecum;
        acc = 0.0;
        for (const auto& [u, w] : dec.silhouette) {
            acc += (C.vertices[w] - C.vertices[u]).norm();
            ecum.push_back(acc);
        }
        for (int k = 0; k < segments_per_apex; ++k) {
            const double pick = uni(rng) * acc;
            const size_t ei =
                std::lower_bound(ecum.begin(), ecum.end(), pick) - ecum.begin();
            const auto& [u, w] = dec.silhouette[std::min(ei, dec.silhouette.size() - 1)];
            const double t = uni(rng);
            segs.tangent.push_back({O, C.vertices[u] + t * (C.vertices[w] - C.vertices[u])});
        }
        all.push_back(std::move(segs));
    }

    ConeDisjointnessReport rep;
    rep.min_near_near = rep.min_tangent_tangent = rep.min_near_tangent =
        std::numeric_limits<double>::max();
    const int k = static_cast<int>(fam.apexes.size());
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            for (const Segment3& a : all[i].near)
                for (const Segment3& b : all[j].near)
                    rep.min_near_near = std::min(rep.min_near_near, segment_segment_distance(a, b));
            for (const Segment3& a : all[i].tangent)
                for (const Segment3& b : all[j].tangent)
                    rep.min_tangent_tangent =
                        std::min(rep.min_tangent_tangent, segment_segment_distance(a, b));
            for (const Segment3& a : all[i].near)
                for (const Segment3& b : all[j].tangent)
                    rep.min_near_tangent =
                        std::min(rep.min_near_tangent, segment_segment_distance(a, b));
            for (const Segment3& a : all[i].tangent)
                for (const Segment3& b : all[j].near)
                    rep.min_near_tangent =
                        std::min(rep.min_near_tangent, segment_segment_distance(a, b));
        }
    for (double d : {rep.min_near_near, rep.min_tangent_tangent, rep.min_near_tangent})
        if (d <= strict) ++rep.violations;
    return rep;
}

MultiMeasureReport measure_multi_check(const NoseFamily& fam, const PressureLaw& law,
                                       const std::vector<std::vector<double>>& s_vectors,
                                       const Tolerances& tol) {
    validate_family(fam, tol);
    const DiscreteSurfaceMeasure nuC = measure_of(fam.C, tol);
    const double F0 = eval_functional(law, nuC);
    const double area = fam.C.surface_area();
    std::vector<DiscreteSurfaceMeasure> nu0s;
    for (const Vec3& O : fam.apexes) nu0s.push_back(decompose(fam.C, O, tol).nu0);

    MultiMeasureReport rep;
    for (const auto& svec : s_vectors) {
        const Polytope Cs = multi_stretch(fam, svec, tol);
        const DiscreteSurfaceMeasure lhs = measure_of(Cs, tol);

        std::vector<double> coeffs{1.0};
        std::vector<DiscreteSurfaceMeasure> parts{nuC};
        double F_lin = F0;
        for (size_t i = 0; i < svec.size(); ++i) {
            coeffs.push_back(svec[i]);
            parts.push_back(nu0s[i]);
            F_lin += svec[i] * eval_functional(law, nu0s[i]);
        }
        const DiscreteSurfaceMeasure rhs = measure_linear_combine(coeffs, parts, tol);
        rep.max_atom_dev_rel =
            std::max(rep.max_atom_dev_rel, max_atom_deviation(lhs, rhs, tol) / area);
        rep.max_F_dev_rel = std::max(
            rep.max_F_dev_rel, std::abs(eval_functional(law, lhs) - F_lin) /
                                   std::max(1.0, std::abs(F_lin)));
    }
    return rep;
}

}  // namespace resist
