#pragma once

// Discrete surface-area measures: atomic measures on the Gauss sphere with
// one atom per facet normal, signed weights allowed (differences of measures
// are first-class citizens). F(nu) = sum_i f(n_i) w_i.

#include "resist/core.hpp"
#include "resist/polytope.hpp"
#include "resist/pressure_law.hpp"

#include <string>
#include <vector>

namespace resist {

struct MeasureAtom {
    Vec3 normal = Vec3::Zero();  // unit
    double weight = 0.0;         // signed area
};

struct DiscreteSurfaceMeasure {
    std::vector<MeasureAtom> atoms;

    double total_weight() const;
    double total_abs_weight() const;
    Vec3 first_moment() const;  // sum_i w_i n_i
};

// Atoms closer than tol.normal_angle on the sphere are summed; the first-seen
// normal represents the merged atom. Atom order is deterministic (first
// appearance).
DiscreteSurfaceMeasure merge_atoms(const std::vector<MeasureAtom>& raw, const Tolerances& tol = {});

// Pushforward of boundary area under the Gauss map, whole boundary or a facet
// subset, optionally negated (sign = -1 builds the subtrahend of a difference).
DiscreteSurfaceMeasure measure_of(const Polytope& P, const Tolerances& tol = {});
DiscreteSurfaceMeasure measure_of(const Polytope& P, const std::vector<int>& facet_ids, double sign,
                                  const Tolerances& tol = {});

DiscreteSurfaceMeasure measure_linear_combine(const std::vector<double>& coeffs,
                                              const std::vector<DiscreteSurfaceMeasure>& parts,
                                              const Tolerances& tol = {});

// Norm of the first moment; zero for the boundary measure of a closed body
// (Minkowski condition).
double closure_defect(const DiscreteSurfaceMeasure& nu);

double eval_functional(const PressureLaw& law, const DiscreteSurfaceMeasure& nu);

// Largest weight discrepancy between two measures over the union of their
// atom normals (normals matched within tol.normal_angle).
double max_atom_deviation(const DiscreteSurfaceMeasure& a, const DiscreteSurfaceMeasure& b,
                          const Tolerances& tol = {});

// CSV round trip, header "nx,ny,nz,weight", doubles as "%.17g".
std::string measure_to_csv(const DiscreteSurfaceMeasure& nu);
DiscreteSurfaceMeasure measure_from_csv(const std::string& csv_text);

}  // namespace resist
