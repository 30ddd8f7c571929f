#pragma once

// Pressure laws tie the three faces of the same physical datum together:
//   p(n): pressure coefficient against a surface element with outward unit
//         normal n (flow along -e3),
//   f(n) = p(n) n3: the density integrated against the surface-area measure,
//   g(X, Y): the graph-reduction integrand, g(grad u) = f(n) dS/dx for the
//         upper graph of u, so g(X, Y) = p((-X, -Y, 1)/sqrt(1 + X^2 + Y^2)).

#include "resist/core.hpp"

#include <functional>
#include <string>

namespace resist {

struct PressureLaw {
    std::string name;
    std::function<double(const Vec3&)> p;
    std::function<double(const Vec3&)> f;
    std::function<double(double, double)> g;
};

// Newtonian impact on a convex body: p = (n3)+^2, f = (n3)+^3,
// g = 1/(1 + X^2 + Y^2).
PressureLaw classical_law();

// f identically 1: F(nu) is plain surface area, g is the area element
// sqrt(1 + X^2 + Y^2). p = 1/n3 is singular at the equator and unused there.
PressureLaw area_law();

// "classical" | "area", or a path to a tabulated-law JSON file.
PressureLaw law_by_name(const std::string& name_or_path);

// Tabulated p on a regular (theta, phi) grid, theta in [0, pi] inclusive,
// phi in [0, 2 pi) periodic, bilinear interpolation in spherical coordinates.
// JSON schema: { "name": str, "theta_samples": int >= 2,
//                "phi_samples": int >= 3, "p": [ theta-major values ] }.
PressureLaw load_tabulated_law(const std::string& json_path);

}  // namespace resist
