#include "resist/height_field.hpp"

#include "resist/mesh_io.hpp"
#include "resist/polytope.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace resist {

namespace {

// Validates convexity, forces counterclockwise orientation.
std::vector<Vec2> normalize_polygon(std::vector<Vec2> poly) {
    require(poly.size() >= 3, ErrorKind::InvalidArgument, "polygon: need at least 3 vertices");
    double area2 = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % poly.size()];
        area2 += a.x() * b.y() - a.y() * b.x();
    }
    require(std::abs(area2) > 0.0, ErrorKind::InvalidArgument, "polygon: zero area");
    if (area2 < 0.0) std::reverse(poly.begin(), poly.end());
    double scale = 0.0;
    for (const Vec2& v : poly) scale = std::max(scale, v.norm());
    for (size_t i = 0; i < poly.size(); ++i) {
        const Vec2 e0 = poly[(i + 1) % poly.size()] - poly[i];
        const Vec2 e1 = poly[(i + 2) % poly.size()] - poly[(i + 1) % poly.size()];
        const double cr = e0.x() * e1.y() - e0.y() * e1.x();
        require(cr >= -1e-12 * scale * scale, ErrorKind::InvalidArgument, "polygon: not convex");
        require(e0.norm() > 1e-12 * scale, ErrorKind::InvalidArgument,
                "polygon: repeated vertex");
    }
    return poly;
}

}  // namespace

double polygon_inward_margin(const std::vector<Vec2>& poly, const Vec2& p) {
    double d = std::numeric_limits<double>::max();
    for (size_t i = 0; i < poly.size(); ++i) {
        const Vec2& a = poly[i];
        const Vec2 e = poly[(i + 1) % poly.size()] - a;
        const Vec2 n_in(-e.y(), e.x());
        d = std::min(d, (p - a).dot(n_in) / n_in.norm());
    }
    return d;
}

namespace {

void fix_orientation(TriMesh2& mesh) {
    for (auto& t : mesh.triangles) {
        const Vec2 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
        const Vec2 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
        if (e1.x() * e2.y() - e1.y() * e2.x() < 0.0) std::swap(t[1], t[2]);
    }
}

// Delaunay connectivity of the given points via the lifted paraboloid: lower
// hull facets of (x, y, x^2+y^2) project to the Delaunay cells.
std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& pts) {
    std::vector<Vec3> lifted;
    lifted.reserve(pts.size());
    std::map<std::pair<double, double>, int> index;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        lifted.emplace_back(pts[i].x(), pts[i].y(), pts[i].squaredNorm());
        index[{pts[i].x(), pts[i].y()}] = i;
    }
    const Polytope hull = hull3d(lifted);

    std::vector<std::array<int, 3>> tris;
    std::vector<char> used(pts.size(), 0);
    for (const Facet& f : hull.facets) {
        if (f.normal.z() >= -1e-9) continue;  // keep the lower hull only
        std::vector<int> loop;
        for (int v : f.loop) {
            const Vec3& q = hull.vertices[v];
            const auto it = index.find({q.x(), q.y()});
            require(it != index.end(), ErrorKind::DegenerateInput,
                    "delaunay: hull vertex lost its source point");
            loop.push_back(it->second);
        }
        for (size_t k = 1; k + 1 < loop.size(); ++k) {
            tris.push_back({loop[0], loop[k], loop[k + 1]});
            used[loop[0]] = used[loop[k]] = used[loop[k + 1]] = 1;
        }
    }
    for (size_t i = 0; i < pts.size(); ++i)
        require(used[i], ErrorKind::DegenerateInput, "delaunay: isolated input point");
    return tris;
}

struct FacetLocator {
    // Uniform grid over the domain bbox holding candidate upper facets.
    struct Plane {
        Vec3 n;
        double c;
        std::vector<Vec2> loop;
    };
    std::vector<Plane> planes;
    std::vector<std::vector<int>> cells;
    Vec2 lo, hi;
    int nx = 1, ny = 1;

    void build(const Polytope& hull, double z_slope_cap) {
        lo = Vec2(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
        hi = -lo;
        for (const Vec3& v : hull.vertices) {
            lo = lo.cwiseMin(Vec2(v.x(), v.y()));
            hi = hi.cwiseMax(Vec2(v.x(), v.y()));
        }
        const double nz_min = 1.0 / std::sqrt(1.0 + z_slope_cap * z_slope_cap);
        for (const Facet& f : hull.facets) {
            if (f.normal.z() < nz_min) continue;
            Plane p;
            p.n = f.normal;
            p.c = f.offset;
            for (int v : f.loop) p.loop.emplace_back(hull.vertices[v].x(), hull.vertices[v].y());
            planes.push_back(std::move(p));
        }
        const int target = std::max(1, static_cast<int>(std::sqrt(planes.size())));
        nx = ny = target;
        cells.assign(static_cast<size_t>(nx) * ny, {});
        for (int i = 0; i < static_cast<int>(planes.size()); ++i) {
            Vec2 flo = hi, fhi = lo;
            for (const Vec2& v : planes[i].loop) {
                flo = flo.cwiseMin(v);
                fhi = fhi.cwiseMax(v);
            }
            const auto [cx0, cy0] = cell_of(flo);
            const auto [cx1, cy1] = cell_of(fhi);
            for (int cy = cy0; cy <= cy1; ++cy)
                for (int cx = cx0; cx <= cx1; ++cx)
                    cells[static_cast<size_t>(cy) * nx + cx].push_back(i);
        }
    }

    std::pair<int, int> cell_of(const Vec2& p) const {
        const Vec2 span = hi - lo;
        int cx = span.x() > 0 ? static_cast<int>((p.x() - lo.x()) / span.x() * nx) : 0;
        int cy = span.y() > 0 ? static_cast<int>((p.y() - lo.y()) / span.y() * ny) : 0;
        return {std::clamp(cx, 0, nx - 1), std::clamp(cy, 0, ny - 1)};
    }

    double eval(const Vec2& p, double fallback) const {
        const auto [cx, cy] = cell_of(p);
        double best = std::numeric_limits<double>::max();
        auto scan = [&](int x, int y) {
            if (x < 0 || y < 0 || x >= nx || y >= ny) return;
            for (int i : cells[static_cast<size_t>(y) * nx + x]) {
                const Plane& pl = planes[i];
                bool inside = true;
                const size_t m = pl.loop.size();
                for (size_t k = 0; k < m && inside; ++k) {
                    const Vec2 e = pl.loop[(k + 1) % m] - pl.loop[k];
                    const Vec2 d = p - pl.loop[k];
                    if (e.x() * d.y() - e.y() * d.x() < -1e-9 * (1.0 + e.norm())) inside = false;
                }
                if (inside) best = std::min(best, (pl.c - pl.n.x() * p.x() - pl.n.y() * p.y()) / pl.n.z());
            }
        };
        scan(cx, cy);
        if (best == std::numeric_limits<double>::max())
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) scan(cx + dx, cy + dy);
        if (best == std::numeric_limits<double>::max()) {
            for (const Plane& pl : planes)
                best = std::min(best, (pl.c - pl.n.x() * p.x() - pl.n.y() * p.y()) / pl.n.z());
        }
        return best == std::numeric_limits<double>::max() ? fallback : best;
    }
};

}  // namespace

double TriMesh2::area() const {
    double a = 0.0;
    for (int t = 0; t < static_cast<int>(triangles.size()); ++t) a += tri_area(*this, t);
    return a;
}

double TriMesh2::max_edge() const {
    double m = 0.0;
    for (const auto& t : triangles)
        for (int k = 0; k < 3; ++k)
            m = std::max(m, (vertices[t[k]] - vertices[t[(k + 1) % 3]]).norm());
    return m;
}

std::vector<std::vector<int>> TriMesh2::vertex_triangles() const {
    std::vector<std::vector<int>> out(vertices.size());
    for (int t = 0; t < static_cast<int>(triangles.size()); ++t)
        for (int v : triangles[t]) out[v].push_back(t);
    return out;
}

std::vector<std::vector<int>> TriMesh2::vertex_neighbors() const {
    std::vector<std::set<int>> nb(vertices.size());
    for (const auto& t : triangles)
        for (int k = 0; k < 3; ++k) {
            nb[t[k]].insert(t[(k + 1) % 3]);
            nb[t[k]].insert(t[(k + 2) % 3]);
        }
    std::vector<std::vector<int>> out(vertices.size());
    for (size_t v = 0; v < nb.size(); ++v) out[v].assign(nb[v].begin(), nb[v].end());
    return out;
}

std::vector<MeshEdge> mesh_edges(const TriMesh2& mesh) {
    std::map<std::pair<int, int>, MeshEdge> acc;
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t)
        for (int k = 0; k < 3; ++k) {
            int a = mesh.triangles[t][k], b = mesh.triangles[t][(k + 1) % 3];
            if (a > b) std::swap(a, b);
            auto [it, fresh] = acc.try_emplace({a, b}, MeshEdge{a, b, t, -1});
            if (!fresh) {
                require(it->second.t1 == -1, ErrorKind::InvalidField,
                        "mesh: edge shared by more than two triangles");
                it->second.t1 = t;
            }
        }
    std::vector<MeshEdge> out;
    out.reserve(acc.size());
    for (const auto& [key, e] : acc) out.push_back(e);
    return out;
}

std::vector<Vec2> regular_polygon(double R, int n) {
    require(R > 0 && n >= 3, ErrorKind::InvalidArgument, "regular_polygon: R > 0 and n >= 3");
    std::vector<Vec2> poly;
    poly.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * M_PI * k / n;
        poly.emplace_back(R * std::cos(th), R * std::sin(th));
    }
    return poly;
}

double polygon_area(const std::vector<Vec2>& poly) {
    double area2 = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % poly.size()];
        area2 += a.x() * b.y() - a.y() * b.x();
    }
    return std::abs(area2) / 2.0;
}

TriMesh2 mesh_polygon(const std::vector<Vec2>& omega, double h) {
    require(h > 0, ErrorKind::InvalidArgument, "mesh_polygon: h must be positive");
    TriMesh2 mesh;
    mesh.omega = normalize_polygon(omega);

    std::vector<Vec2> pts;
    std::vector<char> bnd;
    for (size_t i = 0; i < mesh.omega.size(); ++i) {
        const Vec2& a = mesh.omega[i];
        const Vec2& b = mesh.omega[(i + 1) % mesh.omega.size()];
        const int nseg = std::max(1, static_cast<int>(std::ceil((b - a).norm() / h)));
        for (int k = 0; k < nseg; ++k) {
            pts.push_back(a + (static_cast<double>(k) / nseg) * (b - a));
            bnd.push_back(1);
        }
    }
    Vec2 lo(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
    Vec2 hi = -lo;
    Vec2 centroid = Vec2::Zero();
    for (const Vec2& v : mesh.omega) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
        centroid += v;
    }
    centroid /= static_cast<double>(mesh.omega.size());
    const double dy = h * std::sqrt(3.0) / 2.0;
    for (int j = 0;; ++j) {
        const double y = lo.y() + (j + 0.5) * dy;
        if (y > hi.y()) break;
        const double x0 = lo.x() + (j % 2 ? 0.75 : 0.25) * h;
        for (int k = 0;; ++k) {
            const double x = x0 + k * h;
            if (x > hi.x()) break;
            const Vec2 p(x, y);
            if (polygon_inward_margin(mesh.omega, p) >= 0.4 * h) {
                pts.push_back(p);
                bnd.push_back(0);
            }
        }
    }
    bool centroid_clear = polygon_inward_margin(mesh.omega, centroid) >= 0.4 * h;
    for (const Vec2& p : pts)
        if ((p - centroid).norm() < 0.3 * h) centroid_clear = false;
    if (centroid_clear) {
        pts.push_back(centroid);
        bnd.push_back(0);
    }

    mesh.vertices = pts;
    mesh.boundary = bnd;
    mesh.triangles = delaunay(pts);
    fix_orientation(mesh);
    return mesh;
}

TriMesh2 fan_mesh(const std::vector<Vec2>& omega) {
    TriMesh2 mesh;
    mesh.omega = normalize_polygon(omega);
    mesh.vertices = mesh.omega;
    Vec2 centroid = Vec2::Zero();
    for (const Vec2& v : mesh.omega) centroid += v;
    centroid /= static_cast<double>(mesh.omega.size());
    mesh.vertices.push_back(centroid);
    const int n = static_cast<int>(mesh.omega.size());
    for (int i = 0; i < n; ++i) mesh.triangles.push_back({n, i, (i + 1) % n});
    mesh.boundary.assign(n + 1, 1);
    mesh.boundary[n] = 0;
    fix_orientation(mesh);
    return mesh;
}

TriMesh2 crisscross_square(double half, int n) {
    require(half > 0 && n >= 1, ErrorKind::InvalidArgument, "crisscross_square: bad parameters");
    TriMesh2 mesh;
    mesh.omega = {{-half, -half}, {half, -half}, {half, half}, {-half, half}};
    const double s = 2.0 * half / n;
    auto corner = [&](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
            mesh.vertices.emplace_back(-half + i * s, -half + j * s);
            mesh.boundary.push_back(i == 0 || j == 0 || i == n || j == n ? 1 : 0);
        }
    const int base = static_cast<int>(mesh.vertices.size());
    auto center = [&](int i, int j) { return base + j * n + i; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            mesh.vertices.emplace_back(-half + (i + 0.5) * s, -half + (j + 0.5) * s);
            mesh.boundary.push_back(0);
        }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int c = center(i, j);
            const int v00 = corner(i, j), v10 = corner(i + 1, j);
            const int v11 = corner(i + 1, j + 1), v01 = corner(i, j + 1);
            mesh.triangles.push_back({c, v00, v10});
            mesh.triangles.push_back({c, v10, v11});
            mesh.triangles.push_back({c, v11, v01});
            mesh.triangles.push_back({c, v01, v00});
        }
    fix_orientation(mesh);
    return mesh;
}

double tri_area(const TriMesh2& mesh, int t) {
    const auto& tr = mesh.triangles[t];
    const Vec2 e1 = mesh.vertices[tr[1]] - mesh.vertices[tr[0]];
    const Vec2 e2 = mesh.vertices[tr[2]] - mesh.vertices[tr[0]];
    return 0.5 * std::abs(e1.x() * e2.y() - e1.y() * e2.x());
}

Vec2 tri_gradient(const TriMesh2& mesh, const Eigen::VectorXd& u, int t) {
    const auto& tr = mesh.triangles[t];
    const Vec2 ba = mesh.vertices[tr[1]] - mesh.vertices[tr[0]];
    const Vec2 ca = mesh.vertices[tr[2]] - mesh.vertices[tr[0]];
    const double d1 = u[tr[1]] - u[tr[0]];
    const double d2 = u[tr[2]] - u[tr[0]];
    const double det = ba.x() * ca.y() - ba.y() * ca.x();
    return Vec2((ca.y() * d1 - ba.y() * d2) / det, (-ca.x() * d1 + ba.x() * d2) / det);
}

void validate_field(const HeightField& f, double tau_conc) {
    require(f.M > 0, ErrorKind::InvalidField, "field: M must be positive");
    require(f.u.size() == static_cast<Eigen::Index>(f.mesh.vertices.size()),
            ErrorKind::InvalidField, "field: value/vertex count mismatch");
    require(!f.mesh.triangles.empty(), ErrorKind::InvalidField, "field: empty mesh");
    const double vtol = tau_conc * std::max(1.0, f.M);
    for (Eigen::Index i = 0; i < f.u.size(); ++i)
        require(f.u[i] >= -vtol && f.u[i] <= f.M + vtol, ErrorKind::InvalidField,
                "field: value outside [0, M]");
    const HeightField env = project_concave(f.mesh, f.u, f.M);
    require((env.u - f.u).maxCoeff() <= vtol, ErrorKind::InvalidField,
            "field: values below their least concave majorant");
}

double resistance_2d_unchecked(const PressureLaw& law, const HeightField& f) {
    double F = 0.0;
    for (int t = 0; t < static_cast<int>(f.mesh.triangles.size()); ++t) {
        const Vec2 g = tri_gradient(f.mesh, f.u, t);
        F += law.g(g.x(), g.y()) * tri_area(f.mesh, t);
    }
    return F;
}

double resistance_2d(const PressureLaw& law, const HeightField& f) {
    validate_field(f);
    return resistance_2d_unchecked(law, f);
}

HeightField project_concave(const TriMesh2& mesh, const Eigen::VectorXd& raw, double M) {
    require(M > 0, ErrorKind::InvalidArgument, "project_concave: M must be positive");
    require(raw.size() == static_cast<Eigen::Index>(mesh.vertices.size()),
            ErrorKind::InvalidArgument, "project_concave: value/vertex count mismatch");
    HeightField out;
    out.mesh = mesh;
    out.M = M;
    out.u = raw.cwiseMax(0.0).cwiseMin(M);

    const double zrange = out.u.maxCoeff() - out.u.minCoeff();
    double xyscale = 0.0;
    for (const Vec2& v : mesh.vertices) xyscale = std::max(xyscale, v.norm());
    if (zrange <= 1e-13 * std::max(1.0, xyscale)) return out;  // flat within noise

    std::vector<Vec3> lifted;
    lifted.reserve(mesh.vertices.size());
    for (size_t i = 0; i < mesh.vertices.size(); ++i)
        lifted.emplace_back(mesh.vertices[i].x(), mesh.vertices[i].y(), out.u[i]);
    Polytope hull;
    try {
        hull = hull3d(lifted);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::DegenerateInput) return out;  // nearly flat
        throw;
    }

    // The envelope is the minimum over the upper-facet planes; slopes are
    // bounded by zrange / (shortest edge), so cap the facet slope filter
    // generously rather than exactly.
    FacetLocator locator;
    locator.build(hull, 1e6);
    for (Eigen::Index i = 0; i < out.u.size(); ++i) {
        const double env = locator.eval(mesh.vertices[i], out.u[i]);
        out.u[i] = std::clamp(std::max(env, static_cast<double>(out.u[i])), 0.0, M);
    }
    return out;
}

HeightField embed_radial(const RadialProfile& p, int n_rings, int n_azimuth) {
    validate_profile(p);
    require(n_rings >= 1 && n_azimuth >= 3, ErrorKind::InvalidArgument,
            "embed_radial: need n_rings >= 1, n_azimuth >= 3");
    const int N = p.cells();
    std::vector<int> ring_idx{0};
    for (int k = 1; k <= n_rings; ++k) {
        const int idx = static_cast<int>(std::lround(static_cast<double>(k) * N / n_rings));
        if (idx > ring_idx.back()) ring_idx.push_back(std::min(idx, N));
    }
    if (ring_idx.back() != N) ring_idx.push_back(N);

    HeightField f;
    f.M = p.M;
    std::vector<double> heights;
    f.mesh.vertices.emplace_back(0.0, 0.0);
    f.mesh.boundary.push_back(0);
    heights.push_back(p.phi[0]);
    const int K = static_cast<int>(ring_idx.size()) - 1;  // number of rings
    auto ring_vertex = [&](int ring, int j) { return 1 + (ring - 1) * n_azimuth + (j % n_azimuth); };
    for (int ring = 1; ring <= K; ++ring) {
        const double rho = p.r[ring_idx[ring]];
        for (int j = 0; j < n_azimuth; ++j) {
            const double th = 2.0 * M_PI * j / n_azimuth;
            f.mesh.vertices.emplace_back(rho * std::cos(th), rho * std::sin(th));
            f.mesh.boundary.push_back(ring == K ? 1 : 0);
            heights.push_back(p.phi[ring_idx[ring]]);
        }
    }
    for (int j = 0; j < n_azimuth; ++j)
        f.mesh.triangles.push_back({0, ring_vertex(1, j), ring_vertex(1, j + 1)});
    for (int ring = 1; ring < K; ++ring)
        for (int j = 0; j < n_azimuth; ++j) {
            f.mesh.triangles.push_back(
                {ring_vertex(ring, j), ring_vertex(ring + 1, j), ring_vertex(ring + 1, j + 1)});
            f.mesh.triangles.push_back(
                {ring_vertex(ring, j), ring_vertex(ring + 1, j + 1), ring_vertex(ring, j + 1)});
        }
    for (int j = 0; j < n_azimuth; ++j) {
        const double th = 2.0 * M_PI * j / n_azimuth;
        f.mesh.omega.emplace_back(p.L * std::cos(th), p.L * std::sin(th));
    }
    fix_orientation(f.mesh);
    f.u = Eigen::Map<Eigen::VectorXd>(heights.data(), static_cast<Eigen::Index>(heights.size()));
    return f;
}

HeightField field_from_function(const TriMesh2& mesh, double M,
                                const std::function<double(const Vec2&)>& fn) {
    Eigen::VectorXd raw(mesh.vertices.size());
    for (size_t i = 0; i < mesh.vertices.size(); ++i)
        raw[static_cast<Eigen::Index>(i)] = fn(mesh.vertices[i]);
    return project_concave(mesh, raw, M);
}

std::uint64_t mesh_topology_hash(const TriMesh2& mesh) {
    std::vector<std::int32_t> buf;
    buf.push_back(static_cast<std::int32_t>(mesh.vertices.size()));
    for (const auto& t : mesh.triangles) buf.insert(buf.end(), t.begin(), t.end());
    return fnv1a64(buf.data(), buf.size() * sizeof(std::int32_t));
}

void write_height_field(const std::string& base_path, const HeightField& f, std::uint64_t seed) {
    TriSurface surf;
    surf.vertices.reserve(f.mesh.vertices.size());
    for (size_t i = 0; i < f.mesh.vertices.size(); ++i)
        surf.vertices.emplace_back(f.mesh.vertices[i].x(), f.mesh.vertices[i].y(),
                                   f.u[static_cast<Eigen::Index>(i)]);
    surf.triangles = f.mesh.triangles;
    write_off(base_path + ".off", surf);

    nlohmann::ordered_json side;
    side["omega"] = nlohmann::ordered_json::array();
    for (const Vec2& v : f.mesh.omega) side["omega"].push_back({v.x(), v.y()});
    side["M"] = f.M;
    std::ostringstream hash;
    hash << "0x" << std::hex << mesh_topology_hash(f.mesh);
    side["topology_hash"] = hash.str();
    side["seed"] = std::to_string(seed);
    std::ofstream out(base_path + ".json");
    require(out.good(), ErrorKind::IoError, "cannot write " + base_path + ".json");
    out << side.dump(2) << "\n";
}

HeightField read_height_field(const std::string& base_path) {
    std::ifstream in(base_path + ".json");
    require(in.good(), ErrorKind::IoError, "cannot read " + base_path + ".json");
    nlohmann::json side;
    try {
        side = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
        fail(ErrorKind::IoError, std::string("sidecar parse: ") + e.what());
    }
    const TriSurface surf = read_off(base_path + ".off");

    HeightField f;
    f.M = side.at("M").get<double>();
    for (const auto& xy : side.at("omega"))
        f.mesh.omega.emplace_back(xy.at(0).get<double>(), xy.at(1).get<double>());
    f.mesh.omega = normalize_polygon(f.mesh.omega);
    f.u.resize(static_cast<Eigen::Index>(surf.vertices.size()));
    double scale = 1.0;
    for (const Vec2& v : f.mesh.omega) scale = std::max(scale, v.norm());
    for (size_t i = 0; i < surf.vertices.size(); ++i) {
        const Vec2 xy(surf.vertices[i].x(), surf.vertices[i].y());
        f.mesh.vertices.push_back(xy);
        f.u[static_cast<Eigen::Index>(i)] = surf.vertices[i].z();
        f.mesh.boundary.push_back(std::abs(polygon_inward_margin(f.mesh.omega, xy)) <= 1e-9 * scale ? 1
                                                                                            : 0);
    }
    f.mesh.triangles = surf.triangles;

    std::ostringstream hash;
    hash << "0x" << std::hex << mesh_topology_hash(f.mesh);
    require(hash.str() == side.at("topology_hash").get<std::string>(), ErrorKind::IoError,
            "sidecar topology hash does not match the OFF mesh");
    return f;
}

}  // namespace resist
