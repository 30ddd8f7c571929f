#pragma once

// Structural checks on heightfields: the slope dichotomy, flat-top and
// zero-boundary structure, the vanishing Hessian determinant, and the
// oscillatory second-variation probe.

#include "resist/height_field.hpp"
#include "resist/pressure_law.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace resist {

struct P2Report {
    double delta;
    int total_triangles;
    std::vector<int> violating_triangles;  // |grad| strictly inside (delta, 1-delta)
    double violating_fraction;
    // The printed dichotomy is redundant as stated; we test the forbidden
    // band (0,1) reading and say so instead of deciding silently.
    std::string wording_note;
};
P2Report verify_P2(const HeightField& u, double delta);

struct P4P5Report {
    double tau_top;        // top-set threshold, 1e-6 * M
    int top_vertex_count;
    double top_diameter;
    double top_area;       // triangles fully inside the top set
    double boundary_max_abs;
    double mesh_spacing;   // max edge length
};
P4P5Report verify_P4_P5(const HeightField& u);

struct DetD2Report {
    double margin;
    int tested;
    int excluded_boundary;
    int excluded_top;
    int excluded_crease;
    int excluded_rank;               // not enough well-posed neighbors to fit
    std::vector<int> tested_vertices;
    std::vector<double> abs_det;     // aligned with tested_vertices
    double median_abs_det;
};
DetD2Report verify_detD2(const HeightField& u, double margin, const Tolerances& tol = {});

// Quadratic least-squares fit over the 2-ring of vertex v; empty when the
// stencil is rank deficient. Callers fitting many vertices should precompute
// the adjacency once and pass it.
struct LocalQuadratic {
    Vec2 grad;
    Mat2 hess;
};
std::optional<LocalQuadratic> fit_quadratic(const TriMesh2& mesh, const Eigen::VectorXd& u, int v,
                                            const std::vector<std::vector<int>>* neighbors = nullptr);

// Edges whose graph normals differ by more than tol.crease_angle.
std::vector<int> crease_edges(const TriMesh2& mesh, const Eigen::VectorXd& u,
                              const std::vector<MeshEdge>& edges, const Tolerances& tol = {});

struct BumpProfile {
    std::function<double(double)> value;  // smooth, supported on (-1, 1)
    std::function<double(double)> deriv;
};
BumpProfile default_bump();

enum class ProbeVerdict { CertifiedNonoptimal, Inconclusive };

struct SecondVariationReport {
    Vec2 x0;
    int nearest_vertex;
    Vec2 grad;
    Mat2 D2u;
    Mat2 D2g;
    double a, b;        // Q(tau) = a I1(tau) - b I2(tau); a = lambda_1, b = -lambda_2
    Mat2 rotation;      // columns: eigendirections (chi_1, chi_2) of D2g
    std::vector<double> taus;
    std::vector<double> I1, I2, Q;
    double loglog_slope_I2;  // fitted over entries with tau <= support_radius/3
    double I1_spread;        // max I1 / min I1 over the same asymptotic subset
    bool concavity_definite;
    ProbeVerdict verdict;
};

SecondVariationReport second_variation_probe(const PressureLaw& law, const HeightField& u,
                                             const Vec2& x0, const std::vector<double>& taus,
                                             double support_radius,
                                             const BumpProfile& bump = default_bump(),
                                             const Tolerances& tol = {});

}  // namespace resist
