#pragma once

// Exact distances between low-dimensional primitives, used by obstacle
// clearance and cone-disjointness checks.

#include "resist/core.hpp"
#include "resist/polytope.hpp"

namespace resist {

double point_segment_distance(const Vec3& p, const Segment3& s);
double segment_segment_distance(const Segment3& s, const Segment3& t);
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);
double segment_triangle_distance(const Segment3& s, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace resist
