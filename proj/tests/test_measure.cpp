#include "resist/surface_measure.hpp"

#include "doctest.h"
#include "oracle.hpp"
#include "resist/pressure_law.hpp"

#include <cmath>
#include <fstream>
#include <random>

using namespace resist;
namespace tst = resist::testing;

TEST_CASE("tetrahedron measure has four equal atoms") {
    const auto nu = measure_of(tst::make_tetra());
    REQUIRE(nu.atoms.size() == 4);
    for (const auto& atom : nu.atoms) {
        CHECK(atom.weight == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
        CHECK(atom.normal.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(closure_defect(nu) <= 1e-12 * nu.total_weight());
}

TEST_CASE("closure defect vanishes for closed bodies") {
    for (const Polytope& P : {tst::make_cube(), tst::make_tetra(), tst::make_frustum(),
                              tst::random_polytope(3), tst::random_polytope(4, 200)}) {
        const auto nu = measure_of(P);
        CHECK(closure_defect(nu) <= 1e-9 * P.surface_area());
        CHECK(nu.atoms.size() == P.facets.size());
    }
}

TEST_CASE("area law evaluates to surface area") {
    const PressureLaw area = area_law();
    for (const Polytope& P : {tst::make_cube(), tst::random_polytope(8)}) {
        const double F = eval_functional(area, measure_of(P));
        CHECK(F == doctest::Approx(P.surface_area()).epsilon(1e-12));
    }
}

TEST_CASE("classical functional of the cube is its top facet") {
    // f = (n3)+^3 kills every facet except the upward one.
    const double F = eval_functional(classical_law(), measure_of(tst::make_cube()));
    CHECK(F == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pressure law reduction identity f = g * n3") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const PressureLaw& law : {classical_law(), area_law()}) {
        for (int i = 0; i < 200; ++i) {
            const double x = gauss(rng);
            const double y = gauss(rng);
            const double z = std::abs(gauss(rng)) + 0.05;
            const Vec3 n = Vec3(x, y, z).normalized();
            const double lhs = law.f(n);
            const double rhs = law.g(-n.x() / n.z(), -n.y() / n.z()) * n.z();
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("classical g second differences at zero slope") {
    const PressureLaw law = classical_law();
    const double h = 1e-5;
    const double dxx = (law.g(h, 0) - 2 * law.g(0, 0) + law.g(-h, 0)) / (h * h);
    const double dyy = (law.g(0, h) - 2 * law.g(0, 0) + law.g(0, -h)) / (h * h);
    const double dxy =
        (law.g(h, h) - law.g(h, -h) - law.g(-h, h) + law.g(-h, -h)) / (4 * h * h);
    CHECK(dxx == doctest::Approx(-2.0).epsilon(1e-5));
    CHECK(dyy == doctest::Approx(-2.0).epsilon(1e-5));
    CHECK(dxy == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("atom merge sums nearby normals deterministically") {
    std::vector<MeasureAtom> raw = {{Vec3(0, 0, 1), 1.0},
                                    {Vec3(1, 0, 0), 2.0},
                                    {Vec3(2e-10, 0, 1).normalized(), 3.0}};
    const auto merged = merge_atoms(raw);
    REQUIRE(merged.atoms.size() == 2);
    CHECK(merged.atoms[0].normal == Vec3(0, 0, 1));
    CHECK(merged.atoms[0].weight == doctest::Approx(4.0));
    CHECK(merged.atoms[1].weight == doctest::Approx(2.0));
}

TEST_CASE("linear combinations of measures") {
    const auto nu = measure_of(tst::make_cube());
    const auto zero = measure_linear_combine({1.0, -1.0}, {nu, nu});
    CHECK(zero.total_abs_weight() <= 1e-12);
    const auto same = measure_linear_combine({2.0, -1.0}, {nu, nu});
    CHECK(max_atom_deviation(same, nu) <= 1e-12);
    // eval is linear in the measure.
    const auto mu = measure_of(tst::make_tetra());
    const auto mix = measure_linear_combine({0.3, 0.7}, {nu, mu});
    const PressureLaw law = classical_law();
    CHECK(eval_functional(law, mix) ==
          doctest::Approx(0.3 * eval_functional(law, nu) + 0.7 * eval_functional(law, mu))
              .epsilon(1e-12));
}

TEST_CASE("dilation scales the measure quadratically") {
    const Polytope P = tst::random_polytope(17);
    const auto nu = measure_of(P);
    const auto half = measure_of(dilate(P, P.vertex_mean(), 0.5));
    const auto scaled = measure_linear_combine({0.25}, {nu});
    CHECK(max_atom_deviation(half, scaled) <= 1e-9 * P.surface_area());
}

TEST_CASE("measure CSV round trip is byte identical") {
    const auto nu = measure_of(tst::random_polytope(23));
    const std::string csv = measure_to_csv(nu);
    const auto back = measure_from_csv(csv);
    CHECK(max_atom_deviation(nu, back) == 0.0);
    CHECK(measure_to_csv(back) == csv);
}

TEST_CASE("tabulated law approximates the classical one") {
    // p = cos^2 theta on the upper hemisphere, tabulated densely.
    const int nt = 181, np = 64;
    std::string json = "{\"name\":\"tab\",\"theta_samples\":" + std::to_string(nt) +
                       ",\"phi_samples\":" + std::to_string(np) + ",\"p\":[";
    for (int i = 0; i < nt; ++i) {
        const double theta = M_PI * i / (nt - 1);
        const double c = std::cos(theta);
        const double p = c > 0 ? c * c : 0.0;
        for (int j = 0; j < np; ++j) {
            if (i || j) json += ",";
            json += std::to_string(p);
        }
    }
    json += "]}";
    const std::string path = "tab_law_test.json";
    {
        std::ofstream out(path);
        out << json;
    }
    const PressureLaw tab = load_tabulated_law(path);
    const PressureLaw ref = classical_law();
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = gauss(rng);
        const double y = gauss(rng);
        const double z = std::abs(gauss(rng)) + 0.1;
        const Vec3 n = Vec3(x, y, z).normalized();
        worst = std::max(worst, std::abs(tab.f(n) - ref.f(n)));
    }
    CHECK(worst <= 2e-3);
    std::remove(path.c_str());
}

TEST_CASE("tabulated law rejects malformed tables") {
    const std::string path = "tab_law_bad.json";
    {
        std::ofstream out(path);
        out << "{\"name\":\"bad\",\"theta_samples\":2,\"phi_samples\":3,\"p\":[1,2,3]}";
    }
    CHECK_THROWS_AS(load_tabulated_law(path), Error);
    std::remove(path.c_str());
    CHECK_THROWS_AS(law_by_name("no_such_law_or_file"), Error);
}
