#include "resist/run.hpp"

#include "resist/height_field.hpp"
#include "resist/mesh_io.hpp"
#include "resist/nose_stretch.hpp"
#include "resist/polytope.hpp"
#include "resist/pressure_law.hpp"
#include "resist/radial.hpp"
#include "resist/solver2d.hpp"
#include "resist/surface_measure.hpp"
#include "resist/verify.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace resist {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& text, const std::string& what) {
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        require(used == text.size(), ErrorKind::ConfigError,
                what + ": trailing characters in '" + text + "'");
        require(std::isfinite(v), ErrorKind::ConfigError, what + ": non-finite value");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(ErrorKind::ConfigError, what + ": cannot parse number '" + text + "'");
    }
}

long parse_integer(const std::string& text, const std::string& what) {
    try {
        size_t used = 0;
        const long v = std::stol(text, &used);
        require(used == text.size(), ErrorKind::ConfigError,
                what + ": trailing characters in '" + text + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(ErrorKind::ConfigError, what + ": cannot parse integer '" + text + "'");
    }
}

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    require(in.good(), ErrorKind::IoError, "cannot open " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Collects the names of produced files so the closing manifest covers all of
// them. Files written by module-level writers are registered with note().
class Artifacts {
  public:
    explicit Artifacts(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

    const fs::path& root() const { return dir_; }
    void note(const std::string& name) { names_.push_back(name); }

    void write_text(const std::string& name, const std::string& body) {
        std::ofstream out(dir_ / name, std::ios::binary);
        require(out.good(), ErrorKind::IoError, "cannot write " + (dir_ / name).string());
        out << body;
        note(name);
    }

    void finish(const RunConfig& cfg, int exit_code) {
        ordered_json man;
        man["command"] = cfg.command;
        man["seed"] = std::to_string(cfg.seed);
        man["exit"] = exit_code;
        man["files"] = ordered_json::array();
        for (const std::string& name : names_) {
            const std::string bytes = slurp(dir_ / name);
            ordered_json entry;
            entry["name"] = name;
            entry["bytes"] = bytes.size();
            entry["fnv1a64"] = hex64(fnv1a64(bytes.data(), bytes.size()));
            man["files"].push_back(entry);
        }
        std::ofstream out(dir_ / "manifest.json", std::ios::binary);
        require(out.good(), ErrorKind::IoError, "cannot write manifest");
        out << man.dump(2) << "\n";
    }

  private:
    fs::path dir_;
    std::vector<std::string> names_;
};

Polytope make_cube() {
    std::vector<Vec3> pts;
    for (int i = 0; i < 8; ++i)
        pts.emplace_back(static_cast<double>(i & 1), static_cast<double>((i >> 1) & 1),
                         static_cast<double>((i >> 2) & 1));
    return hull3d(pts);
}

Polytope random_sphere_hull(std::uint64_t seed, int n_points) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec3> pts;
    while (static_cast<int>(pts.size()) < n_points) {
        const double x = gauss(rng);
        const double y = gauss(rng);
        const double z = gauss(rng);
        Vec3 v(x, y, z);
        if (v.norm() < 1e-6) continue;
        pts.push_back(v / v.norm());
    }
    return hull3d(pts);
}

Polytope load_body(const std::string& spec) {
    if (spec == "cube") return make_cube();
    return read_body(spec);
}

std::set<std::pair<int, int>> undirected_silhouette(const NoseDecomposition& dec) {
    std::set<std::pair<int, int>> out;
    for (const auto& [u, w] : dec.silhouette) out.insert({std::min(u, w), std::max(u, w)});
    return out;
}

// Two opposite noses with structurally separated cones: disjoint near facet
// sets and disjoint silhouettes, confirmed by a coarse sampled distance
// screen. Seeds advance deterministically until an instance qualifies.
NoseFamily two_apex_family(std::uint64_t seed) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const Polytope C = random_sphere_hull(seed + 101 * attempt, 20);
        std::mt19937_64 rng(seed * 7919 + attempt);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double x = gauss(rng);
        const double y = gauss(rng);
        const double z = gauss(rng);
        Vec3 d(x, y, z);
        if (d.norm() < 1e-6) continue;
        d.normalize();
        const Vec3 c = C.vertex_mean();
        double radius = 0.0;
        for (const Vec3& v : C.vertices) radius = std::max(radius, (v - c).norm());
        NoseFamily fam;
        fam.C = C;
        fam.apexes = {c + 1.7 * radius * d, c - 1.7 * radius * d};
        try {
            validate_family(fam);
            const auto d0 = decompose(C, fam.apexes[0]);
            const auto d1 = decompose(C, fam.apexes[1]);
            std::set<int> near0(d0.near_facets.begin(), d0.near_facets.end());
            bool facet_overlap = false;
            for (int fct : d1.near_facets) facet_overlap |= near0.count(fct) > 0;
            if (facet_overlap) continue;
            const auto s0 = undirected_silhouette(d0);
            const auto s1 = undirected_silhouette(d1);
            bool edge_overlap = false;
            for (const auto& e : s1) edge_overlap |= s0.count(e) > 0;
            if (edge_overlap) continue;
            if (check_cone_disjointness(fam, 12, seed + attempt).violations != 0) continue;
            return fam;
        } catch (const Error&) {
            continue;
        }
    }
    fail(ErrorKind::NoValidPoint, "no admissible two-apex instance for this seed");
}

NoseFamily cube_two_apex_family() {
    NoseFamily fam;
    fam.C = make_cube();
    fam.apexes = {Vec3(0.5, 0.5, 1.75), Vec3(0.5, 0.5, -0.75)};
    validate_family(fam);
    return fam;
}

struct CheckRow {
    std::string name;
    bool pass = false;
    double metric = 0.0;
    double threshold = 0.0;
};

void append_check(std::vector<CheckRow>& rows, const std::string& name, double metric,
                  double threshold) {
    rows.push_back({name, metric <= threshold, metric, threshold});
}

std::vector<CheckRow> suite_appendix(const RunConfig& cfg) {
    std::vector<CheckRow> rows;
    std::vector<std::pair<std::string, NoseFamily>> instances;
    instances.emplace_back("cube", cube_two_apex_family());
    for (int k = 0; k < 3; ++k)
        instances.emplace_back("random" + std::to_string(k),
                               two_apex_family(cfg.seed + 1000 * (k + 1)));
    const std::vector<double> s_vec = {0.7, 0.4};
    for (const auto& [label, fam] : instances) {
        validate_family(fam);
        const double gap = multi_stretch_hull_gap(fam, s_vec, 10000, cfg.seed);
        append_check(rows, label + ".hull_union_gap", gap, 1e-7 * fam.C.diameter());
        // 50 near + 50 tangent segments per apex give 1e4 cross-apex pairs.
        const auto cones = check_cone_disjointness(fam, 50, cfg.seed);
        append_check(rows, label + ".cone_violations", cones.violations, 0.0);
    }
    return rows;
}

std::vector<CheckRow> suite_measures(const RunConfig& cfg) {
    std::vector<CheckRow> rows;
    std::vector<std::pair<std::string, Polytope>> bodies;
    bodies.emplace_back("cube", make_cube());
    bodies.emplace_back("tetra", hull3d({Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1),
                                         Vec3(-1, -1, 1)}));
    bodies.emplace_back("sphere100", random_sphere_hull(cfg.seed ^ 0x5f5f5f5f, 100));
    for (int k = 0; k < 3; ++k)
        bodies.emplace_back("random" + std::to_string(k), random_sphere_hull(cfg.seed + 31 * k, 20));

    const PressureLaw area = area_law();
    for (const auto& [label, P] : bodies) {
        const double A = P.surface_area();
        const auto nu = measure_of(P);
        append_check(rows, label + ".closure_defect", closure_defect(nu), 1e-9 * A);
        append_check(rows, label + ".area_identity",
                     std::abs(eval_functional(area, nu) - A), 1e-12 * A);
        append_check(rows, label + ".atom_count_gap",
                     std::abs(static_cast<double>(nu.atoms.size()) -
                              static_cast<double>(P.facets.size())),
                     0.0);
        const auto scaled = measure_linear_combine({0.25}, {nu});
        const auto half = measure_of(dilate(P, P.vertex_mean(), 0.5));
        append_check(rows, label + ".dilation_covariance", max_atom_deviation(half, scaled),
                     1e-9 * A);
        const std::string csv = measure_to_csv(nu);
        const bool same = measure_to_csv(measure_from_csv(csv)) == csv;
        rows.push_back({label + ".csv_roundtrip", same, same ? 0.0 : 1.0, 0.0});
    }
    return rows;
}

std::vector<CheckRow> suite_solver(const RunConfig& cfg) {
    std::vector<CheckRow> rows;

    SolveRadialOptions ropts;
    ropts.seed = cfg.seed;
    ropts.multistart = 3;
    ropts.max_gradient_iters = 200;
    const RadialProfile p = solve_radial(1.0, 1.0, 400, ropts);
    validate_profile(p);
    const double R = resistance_radial(p);
    // The solution must strictly beat the slope-1 cone, the best single-slope
    // competitor at M = L.
    append_check(rows, "radial.resistance_vs_cone", R, 0.25 * (1 - 1e-6));
    append_check(rows, "radial.boundary_value", std::abs(p.phi.back()), 1e-9);

    const HeightField emb = embed_radial(p, std::min(96, p.cells()), 128);
    const auto p2 = verify_P2(emb, cfg.delta);
    append_check(rows, "radial.p2_fraction", p2.violating_fraction, 0.02);
    const auto p45 = verify_P4_P5(emb);
    append_check(rows, "radial.p5_boundary", p45.boundary_max_abs, 1e-9);
    rows.push_back({"radial.p4_top_diameter", p45.top_diameter > 2.0 * p45.mesh_spacing,
                    p45.top_diameter, 2.0 * p45.mesh_spacing});

    RadialProfile q = uniform_profile(1.0, 1.0, 200);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uni(-0.3, 1.3);
    for (double& v : q.phi) v = uni(rng);
    project_profile(q);
    validate_profile(q);
    RadialProfile q2 = q;
    project_profile(q2);
    double drift = 0.0;
    for (size_t i = 0; i < q.phi.size(); ++i) drift = std::max(drift, std::abs(q.phi[i] - q2.phi[i]));
    append_check(rows, "radial.projection_idempotent", drift, 1e-12);

    const PressureLaw law = classical_law();
    Solve2DOptions sopts;
    sopts.seed = cfg.seed;
    sopts.multistart = 2;
    sopts.max_gradient_iters = 80;
    sopts.apex_rounds = 10;
    const auto omega = regular_polygon(1.0, 24);
    const HeightField f = solve_2d(law, omega, 1.0, 0.14, sopts);
    validate_field(f);
    const double flat = polygon_area(omega) * law.g(0.0, 0.0);
    append_check(rows, "field.resistance_vs_flat", resistance_2d(law, f), flat * (1 - 1e-6));
    return rows;
}

int run_verify(const RunConfig& cfg, Artifacts& art) {
    std::vector<CheckRow> rows;
    if (cfg.suite == "appendix") {
        rows = suite_appendix(cfg);
    } else if (cfg.suite == "measures") {
        rows = suite_measures(cfg);
    } else {
        rows = suite_solver(cfg);
    }
    bool all = true;
    ordered_json rep;
    rep["command"] = "verify";
    rep["suite"] = cfg.suite;
    rep["seed"] = std::to_string(cfg.seed);
    rep["checks"] = ordered_json::array();
    for (const CheckRow& row : rows) {
        all &= row.pass;
        ordered_json entry;
        entry["name"] = row.name;
        entry["pass"] = row.pass;
        entry["metric"] = row.metric;
        entry["threshold"] = row.threshold;
        rep["checks"].push_back(entry);
    }
    rep["pass"] = all;
    art.write_text("suite_report.json", rep.dump(2) + "\n");
    return all ? 0 : 1;
}

int run_solve_radial(const RunConfig& cfg, Artifacts& art) {
    SolveRadialOptions opts;
    opts.seed = cfg.seed;
    if (cfg.starts > 0) opts.multistart = cfg.starts;
    std::vector<RadialTraceRow> trace;
    opts.trace = &trace;
    const RadialProfile p = solve_radial(cfg.M, cfg.L, cfg.N, opts);
    const double R = resistance_radial(p);

    std::string csv = "r,phi\n";
    for (size_t i = 0; i < p.r.size(); ++i)
        csv += format_double(p.r[i]) + "," + format_double(p.phi[i]) + "\n";
    art.write_text("profile.csv", csv);

    std::string tcsv = "iter,objective,step\n";
    for (const auto& row : trace)
        tcsv += std::to_string(row.iter) + "," + format_double(row.objective) + "," + row.step + "\n";
    art.write_text("trace.csv", tcsv);

    const HeightField emb = embed_radial(p, std::min(96, p.cells()), 128);
    write_height_field((art.root() / "field").string(), emb, cfg.seed);
    art.note("field.off");
    art.note("field.json");

    const P2Report p2 = verify_P2(emb, cfg.delta);
    const P4P5Report p45 = verify_P4_P5(emb);
    const bool pass_p2 = p2.violating_fraction <= 0.02;
    const bool pass_p4 = p45.top_diameter > 2.0 * p45.mesh_spacing;
    const bool pass_p5 = p45.boundary_max_abs <= 1e-9 * cfg.M;
    const bool all = pass_p2 && pass_p4 && pass_p5;

    ordered_json rep;
    rep["command"] = "solve-radial";
    rep["M"] = cfg.M;
    rep["L"] = cfg.L;
    rep["N"] = cfg.N;
    rep["seed"] = std::to_string(cfg.seed);
    rep["resistance"] = R;
    rep["iterations"] = trace.empty() ? 0 : trace.back().iter;
    rep["P2"] = {{"delta", p2.delta},
                 {"violating_fraction", p2.violating_fraction},
                 {"violating_triangles", p2.violating_triangles.size()},
                 {"total_triangles", p2.total_triangles},
                 {"threshold", 0.02},
                 {"pass", pass_p2},
                 {"note", p2.wording_note}};
    rep["P4"] = {{"top_diameter", p45.top_diameter},
                 {"mesh_spacing", p45.mesh_spacing},
                 {"top_vertex_count", p45.top_vertex_count},
                 {"top_area", p45.top_area},
                 {"pass", pass_p4}};
    rep["P5"] = {{"boundary_max_abs", p45.boundary_max_abs},
                 {"threshold", 1e-9 * cfg.M},
                 {"pass", pass_p5}};
    rep["pass"] = all;
    art.write_text("report.json", rep.dump(2) + "\n");
    return all ? 0 : 1;
}

int run_solve_2d(const RunConfig& cfg, Artifacts& art) {
    const PressureLaw law = law_by_name(cfg.law);
    const auto omega = parse_omega(cfg.omega);
    Solve2DOptions opts;
    opts.seed = cfg.seed;
    if (cfg.starts > 0) opts.multistart = cfg.starts;
    std::vector<Trace2DRow> trace;
    opts.trace = &trace;
    const HeightField f = solve_2d(law, omega, cfg.M, cfg.h, opts);
    const double R = resistance_2d(law, f);

    write_height_field((art.root() / "field").string(), f, cfg.seed);
    art.note("field.off");
    art.note("field.json");

    std::string tcsv = "iter,objective,step\n";
    for (const auto& row : trace)
        tcsv += std::to_string(row.iter) + "," + format_double(row.objective) + "," + row.step + "\n";
    art.write_text("trace.csv", tcsv);

    const P2Report p2 = verify_P2(f, cfg.delta);
    const P4P5Report p45 = verify_P4_P5(f);
    const DetD2Report det = verify_detD2(f, 2.0 * f.mesh.max_edge());

    ordered_json rep;
    rep["command"] = "solve-2d";
    rep["law"] = law.name;
    rep["M"] = cfg.M;
    rep["omega"] = cfg.omega;
    rep["h"] = cfg.h;
    rep["seed"] = std::to_string(cfg.seed);
    rep["vertices"] = f.mesh.vertices.size();
    rep["triangles"] = f.mesh.triangles.size();
    rep["resistance"] = R;
    rep["iterations"] = trace.empty() ? 0 : trace.back().iter;
    rep["P2"] = {{"delta", p2.delta},
                 {"violating_fraction", p2.violating_fraction},
                 {"total_triangles", p2.total_triangles},
                 {"note", p2.wording_note}};
    rep["P4"] = {{"top_diameter", p45.top_diameter},
                 {"mesh_spacing", p45.mesh_spacing},
                 {"top_vertex_count", p45.top_vertex_count}};
    rep["P5"] = {{"boundary_max_abs", p45.boundary_max_abs}};
    rep["detD2"] = {{"median_abs_det", det.median_abs_det},
                    {"tested", det.tested},
                    {"excluded_boundary", det.excluded_boundary},
                    {"excluded_top", det.excluded_top},
                    {"excluded_crease", det.excluded_crease},
                    {"excluded_rank", det.excluded_rank}};
    art.write_text("report.json", rep.dump(2) + "\n");
    return 0;
}

int run_stretch(const RunConfig& cfg, Artifacts& art) {
    const Polytope C = load_body(cfg.body);
    const Vec3 apex = parse_vec3(cfg.apex);
    const auto grid = parse_grid(cfg.s_grid);
    const PressureLaw law = law_by_name(cfg.law);

    const auto fam = resistance_along_family(C, apex, law, grid);
    std::string csv = "s,F,area_near,area_V,closure_defect\n";
    for (const auto& row : fam)
        csv += format_double(row.s) + "," + format_double(row.F) + "," +
               format_double(row.area_near) + "," + format_double(row.area_V) + "," +
               format_double(row.closure) + "\n";
    art.write_text("family.csv", csv);

    double worst_closure_rel = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        const Polytope frame = stretch(C, apex, grid[i]);
        char name[32];
        std::snprintf(name, sizeof name, "frame_%03zu.off", i);
        write_body((art.root() / name).string(), frame);
        art.note(name);
        worst_closure_rel = std::max(worst_closure_rel, fam[i].closure / frame.surface_area());
    }

    // Least-squares line through the samples; the family is affine in s, so
    // the residual is numerical noise.
    const auto n = static_cast<double>(grid.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : fam) {
        sx += row.s;
        sy += row.F;
        sxx += row.s * row.s;
        sxy += row.s * row.F;
    }
    const double denom = n * sxx - sx * sx;
    const double slope_fit = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    const double intercept = (sy - slope_fit * sx) / n;
    double residual = 0.0, scale = 0.0;
    for (const auto& row : fam) {
        residual = std::max(residual, std::abs(row.F - (intercept + slope_fit * row.s)));
        scale = std::max(scale, std::abs(row.F));
    }
    const double residual_rel = scale > 0 ? residual / scale : residual;

    const auto dec = decompose(C, apex);
    const double slope_analytic =
        eval_functional(law, dec.cone_measure) - eval_functional(law, dec.near_measure);
    const auto atoms = family_measure_check(C, apex, grid);

    const bool pass_residual = residual_rel <= 1e-9;
    const bool pass_atoms = atoms.max_atom_dev_rel <= 1e-8;
    const bool pass_closure = worst_closure_rel <= 1e-9;
    const bool all = pass_residual && pass_atoms && pass_closure;

    ordered_json rep;
    rep["command"] = "stretch";
    rep["law"] = law.name;
    rep["body"] = cfg.body;
    rep["apex"] = {apex.x(), apex.y(), apex.z()};
    rep["s_grid"] = cfg.s_grid;
    rep["F_at_0"] = intercept;
    rep["slope_fit"] = slope_fit;
    rep["slope_analytic"] = slope_analytic;
    rep["affine_residual_rel"] = residual_rel;
    rep["atom_deviation_rel"] = atoms.max_atom_dev_rel;
    rep["closure_defect_rel"] = worst_closure_rel;
    rep["thresholds"] = {{"affine_residual_rel", 1e-9},
                         {"atom_deviation_rel", 1e-8},
                         {"closure_defect_rel", 1e-9}};
    rep["pass"] = all;
    art.write_text("report.json", rep.dump(2) + "\n");
    return all ? 0 : 1;
}

int run_probe(const RunConfig& cfg, Artifacts& art) {
    const PressureLaw law = law_by_name(cfg.law);
    HeightField f;
    if (cfg.body == "cap") {
        const TriMesh2 mesh = mesh_polygon(parse_omega(cfg.omega), cfg.h);
        const double M = cfg.M;
        f = field_from_function(mesh, M,
                                [M](const Vec2& q) { return M * (1.0 - 0.5 * q.squaredNorm()); });
    } else {
        f = read_height_field(cfg.body);
    }
    const Vec2 x0 = parse_vec2(cfg.x0);
    const auto rep = second_variation_probe(law, f, x0, cfg.taus, cfg.support_radius);

    std::string csv = "tau,I1,I2,Q\n";
    for (size_t i = 0; i < rep.taus.size(); ++i)
        csv += format_double(rep.taus[i]) + "," + format_double(rep.I1[i]) + "," +
               format_double(rep.I2[i]) + "," + format_double(rep.Q[i]) + "\n";
    art.write_text("probe.csv", csv);

    ordered_json out;
    out["command"] = "probe";
    out["law"] = law.name;
    out["x0"] = {rep.x0.x(), rep.x0.y()};
    out["nearest_vertex"] = rep.nearest_vertex;
    out["grad"] = {rep.grad.x(), rep.grad.y()};
    out["D2u"] = {rep.D2u(0, 0), rep.D2u(0, 1), rep.D2u(1, 0), rep.D2u(1, 1)};
    out["D2g"] = {rep.D2g(0, 0), rep.D2g(0, 1), rep.D2g(1, 0), rep.D2g(1, 1)};
    out["a"] = rep.a;
    out["b"] = rep.b;
    out["taus"] = rep.taus;
    out["I1"] = rep.I1;
    out["I2"] = rep.I2;
    out["Q"] = rep.Q;
    out["loglog_slope_I2"] = rep.loglog_slope_I2;
    out["I1_spread"] = rep.I1_spread;
    out["concavity_definite"] = rep.concavity_definite;
    out["verdict"] = rep.verdict == ProbeVerdict::CertifiedNonoptimal ? "CertifiedNonoptimal"
                                                                      : "Inconclusive";
    art.write_text("report.json", out.dump(2) + "\n");
    return 0;
}

}  // namespace

std::uint64_t default_seed() {
    const char* env = std::getenv("RESIST_SEED");
    if (!env || !*env) return 12345;
    try {
        size_t used = 0;
        const unsigned long long v = std::stoull(env, &used);
        require(used == std::string(env).size(), ErrorKind::ConfigError,
                "RESIST_SEED: trailing characters");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(ErrorKind::ConfigError, std::string("RESIST_SEED: cannot parse '") + env + "'");
    }
}

std::vector<double> parse_grid(const std::string& spec) {
    const auto parts = split(spec, ':');
    require(parts.size() == 3, ErrorKind::ConfigError, "grid spec must be a:step:b, got '" + spec + "'");
    const double a = parse_number(parts[0], "grid start");
    const double step = parse_number(parts[1], "grid step");
    const double b = parse_number(parts[2], "grid end");
    require(step > 0, ErrorKind::ConfigError, "grid step must be positive");
    require(b >= a - 1e-12, ErrorKind::ConfigError, "grid end below start");
    const long n = std::lround((b - a) / step);
    const double tol = 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
    require(std::abs(a + static_cast<double>(n) * step - b) <= tol, ErrorKind::ConfigError,
            "grid endpoints are not an integer number of steps apart");
    std::vector<double> out;
    out.reserve(static_cast<size_t>(n) + 1);
    for (long i = 0; i <= n; ++i)
        out.push_back(n ? a + (b - a) * static_cast<double>(i) / static_cast<double>(n) : a);
    return out;
}

std::vector<Vec2> parse_omega(const std::string& spec) {
    if (spec.rfind("disc:", 0) == 0) {
        const auto parts = split(spec, ':');
        require(parts.size() == 3, ErrorKind::ConfigError, "disc spec must be disc:R:nSides");
        const double R = parse_number(parts[1], "disc radius");
        const long n = parse_integer(parts[2], "disc side count");
        require(R > 0, ErrorKind::ConfigError, "disc radius must be positive");
        require(n >= 3, ErrorKind::ConfigError, "disc needs at least 3 sides");
        return regular_polygon(R, static_cast<int>(n));
    }
    if (spec.rfind("poly:", 0) == 0) {
        std::vector<Vec2> pts;
        for (const std::string& pair : split(spec.substr(5), ';')) {
            if (pair.empty()) continue;
            const auto xy = split(pair, ',');
            require(xy.size() == 2, ErrorKind::ConfigError, "polygon point must be x,y");
            pts.emplace_back(parse_number(xy[0], "polygon x"), parse_number(xy[1], "polygon y"));
        }
        require(pts.size() >= 3, ErrorKind::ConfigError, "polygon needs at least 3 points");
        return pts;
    }
    fail(ErrorKind::ConfigError, "domain spec must start with disc: or poly:, got '" + spec + "'");
}

Vec2 parse_vec2(const std::string& spec) {
    const auto parts = split(spec, ',');
    require(parts.size() == 2, ErrorKind::ConfigError, "expected x,y, got '" + spec + "'");
    return {parse_number(parts[0], "x"), parse_number(parts[1], "y")};
}

Vec3 parse_vec3(const std::string& spec) {
    const auto parts = split(spec, ',');
    require(parts.size() == 3, ErrorKind::ConfigError, "expected x,y,z, got '" + spec + "'");
    return {parse_number(parts[0], "x"), parse_number(parts[1], "y"),
            parse_number(parts[2], "z")};
}

RunConfig config_from_json_text(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::ConfigError, std::string("config JSON: ") + e.what());
    }
    require(j.is_object(), ErrorKind::ConfigError, "config JSON must be an object");

    RunConfig cfg;
    cfg.seed = default_seed();
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "command") cfg.command = value.get<std::string>();
            else if (key == "law") cfg.law = value.get<std::string>();
            else if (key == "M") cfg.M = value.get<double>();
            else if (key == "L") cfg.L = value.get<double>();
            else if (key == "N") cfg.N = value.get<int>();
            else if (key == "omega") cfg.omega = value.get<std::string>();
            else if (key == "h") cfg.h = value.get<double>();
            else if (key == "starts") cfg.starts = value.get<int>();
            else if (key == "body") cfg.body = value.get<std::string>();
            else if (key == "apex") cfg.apex = value.get<std::string>();
            else if (key == "s_grid") cfg.s_grid = value.get<std::string>();
            else if (key == "suite") cfg.suite = value.get<std::string>();
            else if (key == "x0") cfg.x0 = value.get<std::string>();
            else if (key == "taus") cfg.taus = value.get<std::vector<double>>();
            else if (key == "support_radius") cfg.support_radius = value.get<double>();
            else if (key == "delta") cfg.delta = value.get<double>();
            else if (key == "seed") cfg.seed = value.is_string()
                                                   ? static_cast<std::uint64_t>(
                                                         parse_integer(value.get<std::string>(), "seed"))
                                                   : value.get<std::uint64_t>();
            else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
            else fail(ErrorKind::ConfigError, "unknown config key '" + key + "'");
        } catch (const Error&) {
            throw;
        } catch (const nlohmann::json::exception&) {
            fail(ErrorKind::ConfigError, "config key '" + key + "' has the wrong type");
        }
    }
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    const std::vector<std::string> commands = {"solve-radial", "solve-2d", "stretch", "verify",
                                               "probe"};
    require(std::find(commands.begin(), commands.end(), cfg.command) != commands.end(),
            ErrorKind::ConfigError, "unknown command '" + cfg.command + "'");
    require(cfg.M > 0, ErrorKind::ConfigError, "M must be positive");
    require(cfg.L > 0, ErrorKind::ConfigError, "L must be positive");
    require(cfg.N >= 2, ErrorKind::ConfigError, "N must be at least 2");
    require(cfg.h > 0, ErrorKind::ConfigError, "h must be positive");
    require(cfg.starts >= 0, ErrorKind::ConfigError, "starts must be nonnegative");
    require(cfg.delta > 0 && cfg.delta < 0.5, ErrorKind::ConfigError, "delta must lie in (0, 0.5)");
    require(cfg.support_radius > 0, ErrorKind::ConfigError, "support_radius must be positive");
    require(!cfg.taus.empty(), ErrorKind::ConfigError, "taus must be nonempty");
    for (double tau : cfg.taus)
        require(tau > 0, ErrorKind::ConfigError, "taus must be positive");
    require(!cfg.out_dir.empty(), ErrorKind::ConfigError, "out_dir must be nonempty");

    if (cfg.law != "classical" && cfg.law != "area")
        require(fs::exists(cfg.law), ErrorKind::ConfigError,
                "law must be classical, area, or an existing file, got '" + cfg.law + "'");
    if (cfg.command == "solve-radial")
        require(cfg.law == "classical", ErrorKind::ConfigError,
                "the radial solver is specific to the classical law");
    if (cfg.command == "solve-2d" || cfg.command == "probe") parse_omega(cfg.omega);
    if (cfg.command == "stretch") {
        parse_vec3(cfg.apex);
        parse_grid(cfg.s_grid);
        if (cfg.body != "cube")
            require(fs::exists(cfg.body), ErrorKind::ConfigError,
                    "body must be 'cube' or an existing mesh file");
    }
    if (cfg.command == "verify")
        require(cfg.suite == "appendix" || cfg.suite == "measures" || cfg.suite == "solver",
                ErrorKind::ConfigError, "suite must be appendix, measures, or solver");
    if (cfg.command == "probe") {
        parse_vec2(cfg.x0);
        if (cfg.body != "cap" && cfg.body != "cube")
            require(fs::exists(cfg.body + ".off"), ErrorKind::ConfigError,
                    "probe body must be 'cap' or a saved field base path");
    }
}

int run(const RunConfig& cfg) {
    validate_config(cfg);
    Artifacts art(cfg.out_dir);
    int code = 0;
    if (cfg.command == "solve-radial") code = run_solve_radial(cfg, art);
    else if (cfg.command == "solve-2d") code = run_solve_2d(cfg, art);
    else if (cfg.command == "stretch") code = run_stretch(cfg, art);
    else if (cfg.command == "verify") code = run_verify(cfg, art);
    else code = run_probe(cfg, art);
    art.finish(cfg, code);
    return code;
}

}  // namespace resist
