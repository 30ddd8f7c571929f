#include "resist/polytope.hpp"

#include "resist/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace resist {

namespace {

constexpr double kTiny = 1e-300;

double cloud_diameter(const std::vector<Vec3>& pts) {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::max());
    Vec3 hi = Vec3::Constant(std::numeric_limits<double>::lowest());
    for (const Vec3& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

// ---------------------------------------------------------------------------
// Quickhull over triangles, conflict lists, horizon expansion.

struct QhFace {
    std::array<int, 3> v{};   // counterclockwise from outside
    std::array<int, 3> nb{};  // nb[i] across edge (v[i], v[(i+1)%3])
    Vec3 n = Vec3::Zero();
    double off = 0.0;
    std::vector<int> pts;  // conflict points
    int far_pt = -1;
    double far_d = 0.0;
    bool alive = true;
};

struct QuickHull {
    const std::vector<Vec3>& p;
    double eps;
    std::vector<QhFace> faces;

    explicit QuickHull(const std::vector<Vec3>& points, double eps_in) : p(points), eps(eps_in) {}

    void plane_of(QhFace& f) const {
        const Vec3 a = p[f.v[0]], b = p[f.v[1]], c = p[f.v[2]];
        Vec3 n = (b - a).cross(c - a);
        const double len = n.norm();
        f.n = len > kTiny ? Vec3(n / len) : Vec3::Zero();
        f.off = f.n.dot((a + b + c) / 3.0);
    }

    double dist(const QhFace& f, int i) const { return f.n.dot(p[i]) - f.off; }

    void seed_simplex(std::array<int, 4>& s) const {
        const int n = static_cast<int>(p.size());
        require(n >= 4, ErrorKind::DegenerateInput, "hull3d needs at least four points");
        // Farthest pair among the six axis extremes.
        std::array<int, 6> ext{};
        for (int axis = 0; axis < 3; ++axis) {
            int lo = 0, hi = 0;
            for (int i = 1; i < n; ++i) {
                if (p[i][axis] < p[lo][axis]) lo = i;
                if (p[i][axis] > p[hi][axis]) hi = i;
            }
            ext[2 * axis] = lo;
            ext[2 * axis + 1] = hi;
        }
        double best = -1.0;
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) {
                const double d = (p[ext[i]] - p[ext[j]]).squaredNorm();
                if (d > best) {
                    best = d;
                    s[0] = ext[i];
                    s[1] = ext[j];
                }
            }
        require(std::sqrt(std::max(best, 0.0)) > eps, ErrorKind::DegenerateInput,
                "hull3d: point cloud collapses to a point");
        const Vec3 u = (p[s[1]] - p[s[0]]).normalized();
        best = -1.0;
        for (int i = 0; i < n; ++i) {
            const double d = (p[i] - p[s[0]]).cross(u).squaredNorm();
            if (d > best) {
                best = d;
                s[2] = i;
            }
        }
        require(std::sqrt(std::max(best, 0.0)) > eps, ErrorKind::DegenerateInput,
                "hull3d: points are collinear");
        const Vec3 nrm = (p[s[1]] - p[s[0]]).cross(p[s[2]] - p[s[0]]).normalized();
        const double off = nrm.dot(p[s[0]]);
        best = -1.0;
        for (int i = 0; i < n; ++i) {
            const double d = std::abs(nrm.dot(p[i]) - off);
            if (d > best) {
                best = d;
                s[3] = i;
            }
        }
        require(best > eps, ErrorKind::DegenerateInput, "hull3d: points are coplanar");
    }

    void build() {
        std::array<int, 4> s{};
        seed_simplex(s);

        faces.clear();
        faces.reserve(128);
        const std::array<std::array<int, 3>, 4> tri = {{{s[0], s[1], s[2]},
                                                        {s[0], s[3], s[1]},
                                                        {s[1], s[3], s[2]},
                                                        {s[2], s[3], s[0]}}};
        for (const auto& t : tri) {
            QhFace f;
            f.v = t;
            faces.push_back(f);
        }
        // Orient every face away from the opposite simplex vertex.
        for (int fi = 0; fi < 4; ++fi) {
            QhFace& f = faces[fi];
            int opp = -1;
            for (int cand : s)
                if (cand != f.v[0] && cand != f.v[1] && cand != f.v[2]) opp = cand;
            plane_of(f);
            if (f.n.dot(p[opp]) - f.off > 0) {
                std::swap(f.v[1], f.v[2]);
                plane_of(f);
            }
        }
        link_all();

        // Conflict lists.
        for (int i = 0; i < static_cast<int>(p.size()); ++i) {
            if (i == s[0] || i == s[1] || i == s[2] || i == s[3]) continue;
            assign_point(i);
        }

        // Expansion loop.
        while (true) {
            int fi = -1;
            double best = eps;
            for (int k = 0; k < static_cast<int>(faces.size()); ++k)
                if (faces[k].alive && faces[k].far_pt >= 0 && faces[k].far_d > best) {
                    best = faces[k].far_d;
                    fi = k;
                }
            if (fi < 0) break;
            add_apex(fi, faces[fi].far_pt);
        }
    }

    void link_all() {
        std::map<std::pair<int, int>, std::pair<int, int>> half;  // directed edge -> (face, slot)
        for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
            if (!faces[fi].alive) continue;
            for (int k = 0; k < 3; ++k)
                half[{faces[fi].v[k], faces[fi].v[(k + 1) % 3]}] = {fi, k};
        }
        for (auto& [e, fk] : half) {
            auto it = half.find({e.second, e.first});
            require(it != half.end(), ErrorKind::DegenerateInput, "hull3d: open edge in seed simplex");
            faces[fk.first].nb[fk.second] = it->second.first;
        }
    }

    void assign_point(int i) {
        for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
            QhFace& f = faces[fi];
            if (!f.alive) continue;
            const double d = dist(f, i);
            if (d > eps) {
                f.pts.push_back(i);
                if (d > f.far_d) {
                    f.far_d = d;
                    f.far_pt = i;
                }
                return;
            }
        }
    }

    void add_apex(int seed_face, int apex) {
        // Visible set by BFS across neighbours.
        std::vector<int> visible{seed_face};
        std::vector<char> seen(faces.size(), 0);
        seen[seed_face] = 1;
        std::vector<std::pair<int, int>> horizon;  // (face, slot) of visible faces facing hidden ones
        for (size_t q = 0; q < visible.size(); ++q) {
            const int fi = visible[q];
            for (int k = 0; k < 3; ++k) {
                const int g = faces[fi].nb[k];
                if (seen[g]) continue;
                if (faces[g].n.dot(p[apex]) - faces[g].off > eps) {
                    seen[g] = 1;
                    visible.push_back(g);
                } else {
                    horizon.push_back({fi, k});
                }
            }
        }

        // Chain horizon edges (u -> w) into a single loop.
        std::map<int, std::pair<int, int>> next;  // u -> (w, hidden neighbour)
        for (auto [fi, k] : horizon) {
            const int u = faces[fi].v[k];
            const int w = faces[fi].v[(k + 1) % 3];
            require(next.find(u) == next.end(), ErrorKind::DegenerateInput,
                    "hull3d: non-simple horizon (nearly degenerate input)");
            next[u] = {w, faces[fi].nb[k]};
        }
        require(!next.empty(), ErrorKind::DegenerateInput, "hull3d: empty horizon");
        std::vector<std::array<int, 3>> loop;  // (u, w, hidden face)
        {
            const int start = next.begin()->first;
            int u = start;
            do {
                auto it = next.find(u);
                require(it != next.end(), ErrorKind::DegenerateInput, "hull3d: broken horizon chain");
                loop.push_back({u, it->second.first, it->second.second});
                u = it->second.first;
            } while (u != start && loop.size() <= next.size());
            require(loop.size() == next.size(), ErrorKind::DegenerateInput,
                    "hull3d: horizon is not a single loop");
        }

        // Collect orphaned conflict points, retire the visible faces.
        std::vector<int> orphans;
        for (int fi : visible) {
            QhFace& f = faces[fi];
            f.alive = false;
            orphans.insert(orphans.end(), f.pts.begin(), f.pts.end());
            f.pts.clear();
            f.far_pt = -1;
            f.far_d = 0.0;
        }

        // New fan around the apex.
        const int base = static_cast<int>(faces.size());
        const int m = static_cast<int>(loop.size());
        for (int k = 0; k < m; ++k) {
            QhFace f;
            f.v = {loop[k][0], loop[k][1], apex};
            f.nb = {loop[k][2], base + (k + 1) % m, base + (k + m - 1) % m};
            plane_of(f);
            faces.push_back(f);
        }
        for (int k = 0; k < m; ++k) {
            // Fix the hidden neighbour's back pointer.
            QhFace& h = faces[loop[k][2]];
            for (int j = 0; j < 3; ++j)
                if (h.v[j] == loop[k][1] && h.v[(j + 1) % 3] == loop[k][0]) h.nb[j] = base + k;
        }

        for (int i : orphans) {
            if (i == apex) continue;
            double best = eps;
            int best_f = -1;
            for (int k = 0; k < m; ++k) {
                const double d = dist(faces[base + k], i);
                if (d > best) {
                    best = d;
                    best_f = base + k;
                }
            }
            if (best_f >= 0) {
                QhFace& f = faces[best_f];
                f.pts.push_back(i);
                if (best > f.far_d) {
                    f.far_d = best;
                    f.far_pt = i;
                }
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Coplanar merging: group hull triangles by common support plane, extract the
// group boundary loop, drop collinear loop vertices, refit the plane.

struct FaceGroup {
    std::vector<int> faces;
    Vec3 n = Vec3::Zero();
    double off = 0.0;
};

Polytope merge_triangles(const std::vector<Vec3>& pts, std::vector<QhFace>& faces, double eps) {
    std::vector<int> alive;
    for (int i = 0; i < static_cast<int>(faces.size()); ++i)
        if (faces[i].alive) alive.push_back(i);

    // Seed groups from large faces first so sliver triangles inherit a stable
    // plane from a well-conditioned neighbour.
    std::vector<double> area(faces.size(), 0.0);
    for (int fi : alive) {
        const QhFace& f = faces[fi];
        area[fi] = 0.5 * (pts[f.v[1]] - pts[f.v[0]]).cross(pts[f.v[2]] - pts[f.v[0]]).norm();
    }
    std::vector<int> order = alive;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return area[a] > area[b]; });

    std::vector<int> group_of(faces.size(), -1);
    std::vector<FaceGroup> groups;
    for (int seed : order) {
        if (group_of[seed] >= 0) continue;
        FaceGroup g;
        g.n = faces[seed].n;
        g.off = faces[seed].off;
        std::vector<int> stack{seed};
        group_of[seed] = static_cast<int>(groups.size());
        while (!stack.empty()) {
            const int fi = stack.back();
            stack.pop_back();
            g.faces.push_back(fi);
            for (int nb : faces[fi].nb) {
                if (!faces[nb].alive || group_of[nb] >= 0) continue;
                bool coplanar = true;
                for (int v : faces[nb].v)
                    coplanar = coplanar && std::abs(g.n.dot(pts[v]) - g.off) <= eps;
                if (coplanar) {
                    group_of[nb] = group_of[seed];
                    stack.push_back(nb);
                }
            }
        }
        groups.push_back(std::move(g));
    }

    Polytope out;
    std::vector<int> remap(pts.size(), -1);
    for (FaceGroup& g : groups) {
        // Boundary half-edges of the group, chained into a loop.
        std::map<int, int> next;
        for (int fi : g.faces) {
            const QhFace& f = faces[fi];
            for (int k = 0; k < 3; ++k) {
                if (group_of[f.nb[k]] == group_of[g.faces[0]]) continue;
                const int u = f.v[k], w = f.v[(k + 1) % 3];
                require(next.find(u) == next.end(), ErrorKind::DegenerateInput,
                        "hull3d: merged facet boundary is not simple");
                next[u] = w;
            }
        }
        std::vector<int> loop;
        const int start = next.begin()->first;
        int u = start;
        do {
            loop.push_back(u);
            auto it = next.find(u);
            require(it != next.end(), ErrorKind::DegenerateInput, "hull3d: broken facet loop");
            u = it->second;
        } while (u != start && loop.size() <= next.size());
        require(loop.size() == next.size(), ErrorKind::DegenerateInput,
                "hull3d: merged facet has more than one boundary loop");

        // Drop loop vertices lying on the segment between their neighbours.
        std::vector<int> slim;
        const int m = static_cast<int>(loop.size());
        for (int k = 0; k < m; ++k) {
            const Vec3& prev = pts[loop[(k + m - 1) % m]];
            const Vec3& cur = pts[loop[k]];
            const Vec3& nxt = pts[loop[(k + 1) % m]];
            const Vec3 d = nxt - prev;
            const double len = d.norm();
            if (len < eps) continue;  // duplicate neighbours
            if ((cur - prev).cross(d / len).norm() > eps) slim.push_back(loop[k]);
        }
        require(slim.size() >= 3, ErrorKind::DegenerateInput, "hull3d: facet collapsed");

        Facet fac;
        Vec3 avec = Vec3::Zero();
        Vec3 centroid = Vec3::Zero();
        for (size_t k = 0; k < slim.size(); ++k) {
            avec += pts[slim[k]].cross(pts[slim[(k + 1) % slim.size()]]);
            centroid += pts[slim[k]];
        }
        avec *= 0.5;
        centroid /= static_cast<double>(slim.size());
        fac.area = avec.norm();
        fac.normal = avec.normalized();
        if (fac.normal.dot(g.n) < 0) fac.normal = -fac.normal;  // guard, should not trigger
        fac.offset = fac.normal.dot(centroid);
        for (int v : slim) {
            if (remap[v] < 0) {
                remap[v] = static_cast<int>(out.vertices.size());
                out.vertices.push_back(pts[v]);
            }
            fac.loop.push_back(remap[v]);
        }
        out.facets.push_back(std::move(fac));
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

double Polytope::diameter() const { return cloud_diameter(vertices); }

Vec3 Polytope::vertex_mean() const {
    Vec3 m = Vec3::Zero();
    for (const Vec3& v : vertices) m += v;
    return vertices.empty() ? m : Vec3(m / static_cast<double>(vertices.size()));
}

double Polytope::surface_area() const {
    double a = 0.0;
    for (const Facet& f : facets) a += f.area;
    return a;
}

double Polytope::volume() const {
    // Divergence theorem with F = x/3.
    double v = 0.0;
    for (const Facet& f : facets) v += f.offset * f.area;
    return v / 3.0;
}

Polytope hull3d(const std::vector<Vec3>& points, const Tolerances& tol) {
    const double diam = cloud_diameter(points);
    require(points.size() >= 4 && diam > 0, ErrorKind::DegenerateInput,
            "hull3d: need a full-dimensional point cloud");
    const double eps = tol.plane * diam;
    QuickHull qh(points, eps);
    qh.build();
    Polytope P = merge_triangles(points, qh.faces, eps);
    validate_polytope(P, tol);
    return P;
}

Polytope dilate(const Polytope& P, const Vec3& center, double ratio) {
    require(ratio > 0, ErrorKind::InvalidArgument, "dilate: ratio must be positive");
    Polytope Q = P;
    for (Vec3& v : Q.vertices) v = center + ratio * (v - center);
    for (Facet& f : Q.facets) {
        f.offset = f.normal.dot(center) + ratio * (f.offset - f.normal.dot(center));
        f.area *= ratio * ratio;
    }
    return Q;
}

Polytope intersect_halfspaces(const std::vector<Vec3>& normals, const std::vector<double>& offsets,
                              const Tolerances& tol) {
    require(normals.size() == offsets.size() && normals.size() >= 4, ErrorKind::InvalidArgument,
            "intersect_halfspaces: need matching normals/offsets, at least four");
    const int m = static_cast<int>(normals.size());
    std::vector<Vec3> n(m);
    std::vector<double> c(m);
    double scale = 1.0;
    for (int i = 0; i < m; ++i) {
        const double len = normals[i].norm();
        require(len > kTiny, ErrorKind::InvalidArgument, "intersect_halfspaces: zero normal");
        n[i] = normals[i] / len;
        c[i] = offsets[i] / len;
        scale = std::max(scale, std::abs(c[i]));
    }

    // Chebyshev center: maximize r with n_i . x + r <= c_i.
    LpProblem lp;
    lp.A.resize(m, 4);
    lp.b.resize(m);
    lp.c = Eigen::Vector4d(0, 0, 0, 1);
    lp.box = 16.0 * scale;
    for (int i = 0; i < m; ++i) {
        lp.A.row(i) << n[i].x(), n[i].y(), n[i].z(), 1.0;
        lp.b(i) = c[i];
    }
    auto sol = seidel_lp(lp);
    require(sol.has_value(), ErrorKind::Empty, "intersect_halfspaces: infeasible system");
    const Vec3 x0 = sol->head<3>();
    const double radius = (*sol)(3);
    require(radius > tol.strict_off * scale, ErrorKind::Empty,
            "intersect_halfspaces: empty or lower-dimensional interior");

    // Polar dual about x0: halfspaces become points, dual hull facets become
    // primal vertices.
    std::vector<Vec3> dual(m);
    for (int i = 0; i < m; ++i) dual[i] = n[i] / (c[i] - n[i].dot(x0));

    Polytope dual_hull;
    try {
        dual_hull = hull3d(dual, tol);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::DegenerateInput)
            fail(ErrorKind::Unbounded, "intersect_halfspaces: normals do not span 3-space");
        throw;
    }

    std::vector<Vec3> verts;
    for (const Facet& f : dual_hull.facets) {
        require(f.offset > 1e-12 / (16.0 * scale), ErrorKind::Unbounded,
                "intersect_halfspaces: intersection is unbounded");
        // The loop of a dual facet lists the halfspaces active at one primal
        // vertex; refine it by least squares on those planes.
        Eigen::MatrixXd Ap(f.loop.size(), 3);
        Eigen::VectorXd bp(f.loop.size());
        int row = 0;
        for (int di : f.loop) {
            // Identify the original halfspace for this dual hull vertex.
            int best = 0;
            double bd = std::numeric_limits<double>::max();
            for (int i = 0; i < m; ++i) {
                const double d = (dual[i] - dual_hull.vertices[di]).squaredNorm();
                if (d < bd) {
                    bd = d;
                    best = i;
                }
            }
            Ap.row(row) = n[best].transpose();
            bp(row) = c[best];
            ++row;
        }
        verts.push_back(Ap.colPivHouseholderQr().solve(bp));
    }

    // Deduplicate vertices where more than three planes meet.
    const double merge_eps = tol.plane * std::max(cloud_diameter(verts), 1e-12);
    std::vector<Vec3> uniq;
    for (const Vec3& v : verts) {
        bool found = false;
        for (const Vec3& u : uniq) found = found || (u - v).norm() <= merge_eps;
        if (!found) uniq.push_back(v);
    }
    require(uniq.size() >= 4, ErrorKind::Empty,
            "intersect_halfspaces: intersection has no 3-dimensional extent");
    return hull3d(uniq, tol);
}

std::vector<Edge> edges(const Polytope& P) {
    std::map<std::pair<int, int>, Edge> acc;
    for (int fi = 0; fi < static_cast<int>(P.facets.size()); ++fi) {
        const auto& loop = P.facets[fi].loop;
        const int m = static_cast<int>(loop.size());
        for (int k = 0; k < m; ++k) {
            int a = loop[k], b = loop[(k + 1) % m];
            if (a > b) std::swap(a, b);
            auto [it, fresh] = acc.try_emplace({a, b}, Edge{a, b, fi, -1});
            if (!fresh) {
                require(it->second.f1 < 0, ErrorKind::DegenerateInput,
                        "polytope edge incident to more than two facets");
                it->second.f1 = fi;
            }
        }
    }
    std::vector<Edge> out;
    out.reserve(acc.size());
    for (auto& [k, e] : acc) {
        require(e.f1 >= 0, ErrorKind::DegenerateInput, "polytope edge incident to one facet");
        out.push_back(e);
    }
    return out;
}

std::vector<Segment3> singular_edges(const Polytope& P, const Tolerances& tol) {
    std::vector<Segment3> out;
    for (const Edge& e : edges(P)) {
        const double ang = angle_between(P.facets[e.f0].normal, P.facets[e.f1].normal);
        if (ang > tol.sing_angle) out.push_back({P.vertices[e.a], P.vertices[e.b]});
    }
    return out;
}

bool contains(const Polytope& P, const Vec3& x, double slack) {
    for (const Facet& f : P.facets)
        if (f.normal.dot(x) - f.offset > slack) return false;
    return true;
}

double support(const Polytope& P, const Vec3& dir) {
    double s = std::numeric_limits<double>::lowest();
    for (const Vec3& v : P.vertices) s = std::max(s, dir.dot(v));
    return s;
}

PointClassification classify_point(const Polytope& P, const Vec3& x, const Tolerances& tol) {
    const double eps = tol.plane * P.diameter();
    PointClassification out;
    out.signed_distance = std::numeric_limits<double>::lowest();
    for (const Facet& f : P.facets)
        out.signed_distance = std::max(out.signed_distance, f.normal.dot(x) - f.offset);
    if (out.signed_distance > eps) {
        out.cls = BoundaryPointClass::Outside;
        return out;
    }
    if (out.signed_distance < -eps) {
        out.cls = BoundaryPointClass::Interior;
        return out;
    }
    for (int fi = 0; fi < static_cast<int>(P.facets.size()); ++fi)
        if (std::abs(P.facets[fi].normal.dot(x) - P.facets[fi].offset) <= eps)
            out.active_facets.push_back(fi);
    for (int a : out.active_facets)
        for (int b : out.active_facets)
            out.cone_angle =
                std::max(out.cone_angle, angle_between(P.facets[a].normal, P.facets[b].normal));
    out.cls = out.cone_angle > tol.sing_angle ? BoundaryPointClass::SingularBoundary
                                              : BoundaryPointClass::RegularBoundary;
    return out;
}

double segment_interior_depth(const Polytope& P, const Segment3& s) {
    // maximize d subject to d <= offset_f - n_f . (a + t (b-a)), 0 <= t <= 1.
    const int m = static_cast<int>(P.facets.size());
    LpProblem lp;
    lp.A.resize(m + 2, 2);
    lp.b.resize(m + 2);
    lp.c = Eigen::Vector2d(0, 1);
    lp.box = 4.0 * std::max(1.0, P.diameter());
    const Vec3 dir = s.b - s.a;
    for (int i = 0; i < m; ++i) {
        lp.A.row(i) << P.facets[i].normal.dot(dir), 1.0;
        lp.b(i) = P.facets[i].offset - P.facets[i].normal.dot(s.a);
    }
    lp.A.row(m) << 1.0, 0.0;
    lp.b(m) = 1.0;
    lp.A.row(m + 1) << -1.0, 0.0;
    lp.b(m + 1) = 0.0;
    auto sol = seidel_lp(lp);
    if (!sol) return -std::numeric_limits<double>::infinity();
    return (*sol)(1);
}

bool segment_meets_interior(const Polytope& P, const Segment3& s, const Tolerances& tol) {
    return segment_interior_depth(P, s) > tol.strict_off * P.diameter();
}

std::optional<std::pair<double, double>> clip_ray(const Polytope& P, const Vec3& origin,
                                                  const Vec3& dir) {
    double t0 = std::numeric_limits<double>::lowest();
    double t1 = std::numeric_limits<double>::max();
    for (const Facet& f : P.facets) {
        const double den = f.normal.dot(dir);
        const double num = f.offset - f.normal.dot(origin);
        if (std::abs(den) < kTiny) {
            if (num < 0) return std::nullopt;
            continue;
        }
        if (den > 0)
            t1 = std::min(t1, num / den);
        else
            t0 = std::max(t0, num / den);
    }
    if (t0 > t1) return std::nullopt;
    return std::make_pair(t0, t1);
}

Vec3 place_nose_point(const Polytope& P, int vertex, double eps, const std::vector<Vec3>& A,
                      const Tolerances& tol) {
    require(vertex >= 0 && vertex < static_cast<int>(P.vertices.size()), ErrorKind::InvalidArgument,
            "place_nose_point: vertex index out of range");
    const Vec3 xi = P.vertices[vertex];

    // Normal cone from facet incidence; the vertex must be regular.
    Vec3 dir = Vec3::Zero();
    double cone = 0.0;
    std::vector<const Facet*> inc;
    for (const Facet& f : P.facets)
        if (std::find(f.loop.begin(), f.loop.end(), vertex) != f.loop.end()) inc.push_back(&f);
    require(!inc.empty(), ErrorKind::InvalidArgument, "place_nose_point: isolated vertex");
    for (const Facet* f : inc) dir += f->normal;
    for (const Facet* a : inc)
        for (const Facet* b : inc) cone = std::max(cone, angle_between(a->normal, b->normal));
    require(cone <= tol.sing_angle, ErrorKind::NotRegularVertex,
            "place_nose_point: vertex normal cone wider than sing_angle");
    dir.normalize();

    for (const Vec3& a : A)
        require(contains(P, a, tol.plane * P.diameter()), ErrorKind::InvalidArgument,
                "place_nose_point: obstacle-condition point outside the body");

    double step = 0.5 * eps;
    for (int attempt = 0; attempt < 8; ++attempt, step *= 0.5) {
        const Vec3 O = xi + step * dir;
        if (classify_point(P, O, tol).cls != BoundaryPointClass::Outside) continue;
        bool ok = (O - xi).norm() < eps;
        for (const Vec3& a : A) ok = ok && segment_meets_interior(P, {O, a}, tol);
        if (ok) return O;
    }
    fail(ErrorKind::NoValidPoint, "place_nose_point: no admissible apex after eight retries");
}

void validate_polytope(const Polytope& P, const Tolerances& tol) {
    require(P.vertices.size() >= 4 && P.facets.size() >= 4, ErrorKind::DegenerateInput,
            "polytope: too few vertices or facets");
    const double eps = 8.0 * tol.plane * P.diameter();
    for (const Facet& f : P.facets) {
        require(f.loop.size() >= 3, ErrorKind::DegenerateInput, "polytope: short facet loop");
        require(f.area > 0, ErrorKind::DegenerateInput, "polytope: non-positive facet area");
        require(std::abs(f.normal.norm() - 1.0) < 1e-9, ErrorKind::DegenerateInput,
                "polytope: non-unit facet normal");
    }
    for (const Vec3& v : P.vertices)
        for (const Facet& f : P.facets)
            require(f.normal.dot(v) - f.offset <= eps, ErrorKind::DegenerateInput,
                    "polytope: vertex outside a facet plane");
    const auto es = edges(P);  // throws unless every edge has exactly two facets
    const long V = static_cast<long>(P.vertices.size());
    const long E = static_cast<long>(es.size());
    const long F = static_cast<long>(P.facets.size());
    if (V - E + F != 2) {
        std::ostringstream os;
        os << "polytope: Euler characteristic " << (V - E + F) << " (V=" << V << " E=" << E
           << " F=" << F << ")";
        fail(ErrorKind::DegenerateInput, os.str());
    }
}

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DegenerateInput: return "DegenerateInput";
        case ErrorKind::Unbounded: return "Unbounded";
        case ErrorKind::Empty: return "Empty";
        case ErrorKind::NotOutside: return "NotOutside";
        case ErrorKind::ApexInside: return "ApexInside";
        case ErrorKind::NotRegularVertex: return "NotRegularVertex";
        case ErrorKind::NoValidPoint: return "NoValidPoint";
        case ErrorKind::ObstacleHit: return "ObstacleHit";
        case ErrorKind::FamilyInvariantViolated: return "FamilyInvariantViolated";
        case ErrorKind::CreaseDetected: return "CreaseDetected";
        case ErrorKind::TooCloseToBound: return "TooCloseToBound";
        case ErrorKind::InvalidProfile: return "InvalidProfile";
        case ErrorKind::InvalidField: return "InvalidField";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "UnknownError";
}

}  // namespace resist
