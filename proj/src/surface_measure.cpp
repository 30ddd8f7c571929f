#include "resist/surface_measure.hpp"

#include "resist/mesh_io.hpp"

#include <cmath>
#include <sstream>

namespace resist {

double DiscreteSurfaceMeasure::total_weight() const {
    double s = 0.0;
    for (const MeasureAtom& a : atoms) s += a.weight;
    return s;
}

double DiscreteSurfaceMeasure::total_abs_weight() const {
    double s = 0.0;
    for (const MeasureAtom& a : atoms) s += std::abs(a.weight);
    return s;
}

Vec3 DiscreteSurfaceMeasure::first_moment() const {
    Vec3 m = Vec3::Zero();
    for (const MeasureAtom& a : atoms) m += a.weight * a.normal;
    return m;
}

DiscreteSurfaceMeasure merge_atoms(const std::vector<MeasureAtom>& raw, const Tolerances& tol) {
    DiscreteSurfaceMeasure nu;
    for (const MeasureAtom& a : raw) {
        bool merged = false;
        for (MeasureAtom& m : nu.atoms) {
            if (angle_between(m.normal, a.normal) <= tol.normal_angle) {
                m.weight += a.weight;
                merged = true;
                break;
            }
        }
        if (!merged) nu.atoms.push_back(a);
    }
    return nu;
}

DiscreteSurfaceMeasure measure_of(const Polytope& P, const Tolerances& tol) {
    std::vector<MeasureAtom> raw;
    raw.reserve(P.facets.size());
    for (const Facet& f : P.facets) raw.push_back({f.normal, f.area});
    return merge_atoms(raw, tol);
}

DiscreteSurfaceMeasure measure_of(const Polytope& P, const std::vector<int>& facet_ids, double sign,
                                  const Tolerances& tol) {
    std::vector<MeasureAtom> raw;
    raw.reserve(facet_ids.size());
    for (int id : facet_ids) {
        require(id >= 0 && id < static_cast<int>(P.facets.size()), ErrorKind::InvalidArgument,
                "measure_of: facet index out of range");
        raw.push_back({P.facets[id].normal, sign * P.facets[id].area});
    }
    return merge_atoms(raw, tol);
}

DiscreteSurfaceMeasure measure_linear_combine(const std::vector<double>& coeffs,
                                              const std::vector<DiscreteSurfaceMeasure>& parts,
                                              const Tolerances& tol) {
    require(coeffs.size() == parts.size(), ErrorKind::InvalidArgument,
            "measure_linear_combine: coefficient/measure count mismatch");
    std::vector<MeasureAtom> raw;
    for (size_t i = 0; i < parts.size(); ++i)
        for (const MeasureAtom& a : parts[i].atoms) raw.push_back({a.normal, coeffs[i] * a.weight});
    return merge_atoms(raw, tol);
}

double closure_defect(const DiscreteSurfaceMeasure& nu) { return nu.first_moment().norm(); }

double eval_functional(const PressureLaw& law, const DiscreteSurfaceMeasure& nu) {
    double s = 0.0;
    for (const MeasureAtom& a : nu.atoms) s += law.f(a.normal) * a.weight;
    return s;
}

double max_atom_deviation(const DiscreteSurfaceMeasure& a, const DiscreteSurfaceMeasure& b,
                          const Tolerances& tol) {
    // Compare on the union of supports: fold b with opposite sign onto a and
    // look at what survives.
    const DiscreteSurfaceMeasure diff = measure_linear_combine({1.0, -1.0}, {a, b}, tol);
    double dev = 0.0;
    for (const MeasureAtom& at : diff.atoms) dev = std::max(dev, std::abs(at.weight));
    return dev;
}

std::string measure_to_csv(const DiscreteSurfaceMeasure& nu) {
    std::ostringstream os;
    os << "nx,ny,nz,weight\n";
    for (const MeasureAtom& a : nu.atoms)
        os << format_double(a.normal.x()) << ',' << format_double(a.normal.y()) << ','
           << format_double(a.normal.z()) << ',' << format_double(a.weight) << '\n';
    return os.str();
}

DiscreteSurfaceMeasure measure_from_csv(const std::string& csv_text) {
    std::istringstream is(csv_text);
    std::string line;
    require(static_cast<bool>(std::getline(is, line)), ErrorKind::IoError, "empty measure CSV");
    require(line == "nx,ny,nz,weight", ErrorKind::IoError,
            "measure CSV header must be nx,ny,nz,weight");
    DiscreteSurfaceMeasure nu;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        MeasureAtom a;
        char comma;
        require(static_cast<bool>(ls >> a.normal.x() >> comma >> a.normal.y() >> comma >>
                                  a.normal.z() >> comma >> a.weight),
                ErrorKind::IoError, "bad measure CSV row: " + line);
        nu.atoms.push_back(a);
    }
    return nu;
}

}  // namespace resist
