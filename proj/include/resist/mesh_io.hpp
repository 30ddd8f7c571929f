#pragma once

// ASCII OFF / OBJ import and export. Exported facets are triangulated and
// floats are printed with "%.17g" so round trips are bit-faithful. Import
// accepts polygonal faces. Convex bodies are rebuilt through hull3d on import,
// keeping a single canonical facet-construction path.

#include "resist/core.hpp"
#include "resist/polytope.hpp"

#include <array>
#include <string>
#include <vector>

namespace resist {

struct TriSurface {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
};

TriSurface triangulate(const Polytope& P);  // fan per facet loop

void write_off(const std::string& path, const TriSurface& S);
void write_obj(const std::string& path, const TriSurface& S);
TriSurface read_off(const std::string& path);
TriSurface read_obj(const std::string& path);

// Format chosen by extension (.off / .obj).
void write_body(const std::string& path, const Polytope& P);
Polytope read_body(const std::string& path, const Tolerances& tol = {});

std::string format_double(double x);  // "%.17g"

}  // namespace resist
