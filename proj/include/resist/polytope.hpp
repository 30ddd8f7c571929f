#pragma once

// Convex polytope geometry. A Polytope is a closed bounded convex body in
// vertex + facet representation: unit outward facet normals, vertex loops
// counterclockwise as seen from outside, merged coplanar facets, and no
// vertex interior to a facet or an edge.

#include "resist/core.hpp"

#include <array>
#include <optional>
#include <vector>

namespace resist {

struct Segment3 {
    Vec3 a = Vec3::Zero();
    Vec3 b = Vec3::Zero();
};

struct Facet {
    Vec3 normal = Vec3::Zero();  // unit, outward
    double offset = 0.0;         // plane { x : normal . x = offset }
    std::vector<int> loop;       // vertex ring, counterclockwise from outside
    double area = 0.0;
};

struct Edge {
    int a = -1, b = -1;    // vertex indices, a < b
    int f0 = -1, f1 = -1;  // the two incident facets
};

struct Polytope {
    std::vector<Vec3> vertices;
    std::vector<Facet> facets;

    double diameter() const;  // bounding-box diagonal
    Vec3 vertex_mean() const;
    double surface_area() const;
    double volume() const;
};

enum class BoundaryPointClass { Interior, RegularBoundary, SingularBoundary, Outside };

struct PointClassification {
    BoundaryPointClass cls = BoundaryPointClass::Outside;
    double signed_distance = 0.0;    // max over facets of n.x - offset
    double cone_angle = 0.0;         // angular diameter of the active normal set
    std::vector<int> active_facets;  // facets whose plane passes through x (within tol)
};

// Convex hull with coplanar-facet merging. Throws DegenerateInput when the
// points do not span three dimensions (within tol.plane at unit diameter).
Polytope hull3d(const std::vector<Vec3>& points, const Tolerances& tol = {});

// Homothety x -> center + ratio (x - center), ratio > 0.
Polytope dilate(const Polytope& P, const Vec3& center, double ratio);

// Intersection of { x : normals[i] . x <= offsets[i] }. Throws Empty when the
// interior is empty and Unbounded when the intersection is not a body.
Polytope intersect_halfspaces(const std::vector<Vec3>& normals, const std::vector<double>& offsets,
                              const Tolerances& tol = {});

std::vector<Edge> edges(const Polytope& P);

// Edges whose dihedral angle exceeds tol.sing_angle, as segments. For coarse
// polytopes this is the whole edge skeleton; for fine approximations of smooth
// bodies it is empty.
std::vector<Segment3> singular_edges(const Polytope& P, const Tolerances& tol = {});

bool contains(const Polytope& P, const Vec3& x, double slack);
double support(const Polytope& P, const Vec3& dir);

PointClassification classify_point(const Polytope& P, const Vec3& x, const Tolerances& tol = {});

// Depth of the deepest point of the segment inside P (negative when the
// segment stays outside). The strict predicate compares against
// tol.strict_off scaled by the diameter.
double segment_interior_depth(const Polytope& P, const Segment3& s);
bool segment_meets_interior(const Polytope& P, const Segment3& s, const Tolerances& tol = {});

// Parameter range [t0, t1] for which origin + t dir lies in P.
std::optional<std::pair<double, double>> clip_ray(const Polytope& P, const Vec3& origin,
                                                  const Vec3& dir);

// Apex placement off a regular vertex: returns O outside P with |O - xi| < eps
// such that the open segment (O, a) meets the interior for every a in the
// obstacle-condition set A. Retries by halving the offset up to eight times,
// then throws NoValidPoint. Throws NotRegularVertex when the vertex normal
// cone is wider than tol.sing_angle.
Vec3 place_nose_point(const Polytope& P, int vertex, double eps, const std::vector<Vec3>& A,
                      const Tolerances& tol = {});

// Structural invariants: two facets per edge, Euler formula, outward planes
// containing all vertices, positive areas. Throws on violation.
void validate_polytope(const Polytope& P, const Tolerances& tol = {});

}  // namespace resist
