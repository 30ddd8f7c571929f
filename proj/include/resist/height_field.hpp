#pragma once

// Concave heightfields over a convex polygon: triangulated domains, the
// resistance functional in P1 form, and the least-concave-majorant projection.

#include "resist/core.hpp"
#include "resist/pressure_law.hpp"
#include "resist/radial.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace resist {

struct TriMesh2 {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;  // counterclockwise
    std::vector<Vec2> omega;                    // convex domain polygon, counterclockwise
    std::vector<char> boundary;                 // 1 for vertices on the domain boundary

    double area() const;
    double max_edge() const;
    std::vector<std::vector<int>> vertex_triangles() const;
    std::vector<std::vector<int>> vertex_neighbors() const;
};

struct MeshEdge {
    int a, b;    // a < b
    int t0, t1;  // adjacent triangles, t1 = -1 on the boundary
};
std::vector<MeshEdge> mesh_edges(const TriMesh2& mesh);

std::vector<Vec2> regular_polygon(double R, int n);
double polygon_area(const std::vector<Vec2>& poly);
// Smallest inward distance to the polygon's edge lines; positive inside,
// negative outside (polygon must be convex counterclockwise).
double polygon_inward_margin(const std::vector<Vec2>& poly, const Vec2& p);

// Hex-lattice interior points plus boundary subdivision, Delaunay-connected.
TriMesh2 mesh_polygon(const std::vector<Vec2>& omega, double h);
// One interior vertex at the centroid; exact for single-cone fields.
TriMesh2 fan_mesh(const std::vector<Vec2>& omega);
// Symmetric criss-cross mesh of the square [-half, half]^2, n cells per side.
TriMesh2 crisscross_square(double half, int n);

struct HeightField {
    TriMesh2 mesh;
    double M = 1.0;
    Eigen::VectorXd u;
};

// Bounds plus least-concave-majorant agreement within tau_conc * max(1, M).
void validate_field(const HeightField& u, double tau_conc = 1e-9);

Vec2 tri_gradient(const TriMesh2& mesh, const Eigen::VectorXd& u, int t);
double tri_area(const TriMesh2& mesh, int t);

double resistance_2d(const PressureLaw& law, const HeightField& u);
double resistance_2d_unchecked(const PressureLaw& law, const HeightField& u);

// clamp -> least concave majorant (3-D upper hull of the lifted vertices)
// -> clamp; idempotent; never below the clamped input.
HeightField project_concave(const TriMesh2& mesh, const Eigen::VectorXd& raw, double M);

// Surface of revolution of a radial profile on a ring-fan mesh whose ring
// radii are profile grid points, so ring values are exact profile values.
HeightField embed_radial(const RadialProfile& p, int n_rings, int n_azimuth);

HeightField field_from_function(const TriMesh2& mesh, double M,
                                const std::function<double(const Vec2&)>& f);

std::uint64_t mesh_topology_hash(const TriMesh2& mesh);

// Graph surface as OFF plus a JSON sidecar (omega, M, topology hash, seed).
// Paths are base_path + ".off" / ".json".
void write_height_field(const std::string& base_path, const HeightField& u,
                        std::uint64_t seed = 0);
HeightField read_height_field(const std::string& base_path);

}  // namespace resist
