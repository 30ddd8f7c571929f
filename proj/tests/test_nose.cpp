#include "resist/nose_stretch.hpp"

#include "doctest.h"
#include "oracle.hpp"
#include "resist/surface_measure.hpp"

#include <cmath>

using namespace resist;
namespace tst = resist::testing;

TEST_CASE("cube decomposition under a centered apex") {
    const Polytope C = tst::make_cube();
    const Vec3 apex(0.5, 0.5, 1.5);
    const auto dec = decompose(C, apex);
    CHECK(dec.near_facets.size() == 1);
    CHECK(dec.far_facets.size() == 5);
    CHECK(dec.near_area == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(dec.silhouette.size() == 4);
    REQUIRE(dec.cone_triangles.size() == 4);
    // Each lateral triangle: unit base edge at height 1, apex sqrt(0.5) away.
    CHECK(dec.cone_area == doctest::Approx(4.0 * 0.5 * std::sqrt(0.5)).epsilon(1e-12));
    // nu0 weights: the cone atoms minus the near facet atom.
    CHECK(dec.nu0.total_weight() ==
          doctest::Approx(dec.cone_area - dec.near_area).epsilon(1e-12));
    // The velocity measure is exactly closed against the near one: moving
    // along the family preserves the Minkowski condition.
    const auto nu = measure_of(C);
    for (double s : {0.25, 0.5, 1.0}) {
        const auto moved = measure_linear_combine({1.0, s}, {nu, dec.nu0});
        CHECK(closure_defect(moved) <= 1e-12 * moved.total_abs_weight());
    }
}

TEST_CASE("apex placement errors") {
    const Polytope C = tst::make_cube();
    try {
        decompose(C, Vec3(0.5, 0.5, 0.5));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ApexInside);
    }
    CHECK_THROWS_AS(stretch(C, Vec3(0.5, 0.5, 1.5), 1.7), Error);
    CHECK_THROWS_AS(stretch(C, Vec3(0.5, 0.5, 1.5), -0.9), Error);
}

TEST_CASE("stretch endpoints and monotonicity") {
    const Polytope C = tst::random_polytope(31);
    const Vec3 apex = tst::outside_apex(C, 32);
    const Polytope S0 = stretch(C, apex, 0.0);
    CHECK(tst::vertex_set_distance(S0.vertices, C.vertices) <= 1e-9 * C.diameter());

    std::vector<Vec3> with_apex = C.vertices;
    with_apex.push_back(apex);
    const Polytope S1 = stretch(C, apex, 1.0);
    CHECK(tst::vertex_set_distance(S1.vertices, hull3d(with_apex).vertices) <=
          1e-9 * C.diameter());

    const Polytope Sa = stretch(C, apex, 0.3);
    const Polytope Sb = stretch(C, apex, 0.7);
    for (const Vec3& v : Sa.vertices)
        CHECK(classify_point(Sb, v).cls != BoundaryPointClass::Outside);
    for (const Vec3& v : C.vertices)
        CHECK(classify_point(Sa, v).cls != BoundaryPointClass::Outside);
}

TEST_CASE("stretch support function matches the dilation family") {
    // C(s) is the hull of the union over lam in [sqrt(1-s), 1] of
    // lam C + (1-lam) O; the support function is the max over the endpoints
    // because it is affine in lam.
    for (std::uint64_t seed : {51u, 52u, 53u}) {
        const Polytope C = tst::random_polytope(seed);
        const Vec3 apex = tst::outside_apex(C, seed + 7);
        for (double s : {0.3, 0.7, 1.0}) {
            const Polytope S = stretch(C, apex, s);
            const double lam = std::sqrt(1.0 - s);
            const double mism = tst::support_mismatch(
                S,
                [&](const Vec3& d) {
                    const double hc = support(C, d);
                    return std::max(hc, lam * hc + (1.0 - lam) * d.dot(apex));
                },
                200, seed + 100);
            CHECK(mism <= 1e-8 * C.diameter());
        }
    }
}

TEST_CASE("surface measure moves linearly along the family") {
    for (std::uint64_t seed : {61u, 62u}) {
        const Polytope C = tst::random_polytope(seed);
        const Vec3 apex = tst::outside_apex(C, seed + 3);
        std::vector<double> grid;
        for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
        const auto rep = family_measure_check(C, apex, grid);
        CHECK(rep.max_atom_dev_rel <= 1e-10);
    }
}

TEST_CASE("resistance along the family is affine with the analytic slope") {
    const Polytope C = tst::make_cube();
    const Vec3 apex(0.5, 0.5, 1.5);
    const PressureLaw law = classical_law();
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
    const auto fam = resistance_along_family(C, apex, law, grid);
    const auto dec = decompose(C, apex);
    const double slope =
        eval_functional(law, dec.cone_measure) - eval_functional(law, dec.near_measure);
    for (size_t i = 0; i < grid.size(); ++i) {
        CHECK(fam[i].F == doctest::Approx(fam[0].F + slope * grid[i]).epsilon(1e-10));
        CHECK(fam[i].area_near == doctest::Approx((1 - grid[i]) * dec.near_area).epsilon(1e-12));
        CHECK(fam[i].area_V == doctest::Approx(grid[i] * dec.cone_area).epsilon(1e-12));
        CHECK(fam[i].closure <= 1e-10 * C.surface_area());
    }
}

TEST_CASE("frustum toward its pyramid tip is affine on both sides") {
    const Polytope C = tst::make_frustum();
    const Vec3 tip = tst::frustum_tip();
    const PressureLaw law = classical_law();
    // No obstacles: the negative range opens fully.
    const auto rep = stretch_derivative(C, tip, law, 1e-3, {});
    CHECK(rep.two_sided);
    CHECK(rep.s_min <= -2e-3);
    CHECK(rep.fd == doctest::Approx(rep.analytic).epsilon(1e-9));

    // Spot-check affineness across zero directly.
    const auto dec = decompose(C, tip);
    const double slope =
        eval_functional(law, dec.cone_measure) - eval_functional(law, dec.near_measure);
    const double F0 = eval_functional(law, measure_of(C));
    for (double s : {-0.3, -0.1, 0.2, 0.6}) {
        const Polytope S = stretch(C, tip, s);
        CHECK(eval_functional(law, measure_of(S)) ==
              doctest::Approx(F0 + slope * s).epsilon(1e-10));
    }
}

TEST_CASE("silhouette obstacles close the negative range") {
    const Polytope C = tst::make_cube();
    const Vec3 apex(0.5, 0.5, 1.5);
    // The obstacle surrogate contains the top edges: every sight line to them
    // grazes the boundary, so the visibility hypothesis fails.
    ObstacleSet obstacles;
    for (const Segment3& e : singular_edges(C)) obstacles.segments.push_back(e);
    CHECK(negative_range(C, apex, obstacles) == 0.0);
    const auto rep = stretch_derivative(C, apex, classical_law(), 1e-3, obstacles);
    CHECK_FALSE(rep.two_sided);
    CHECK(rep.fd == doctest::Approx(rep.analytic).epsilon(1e-9));

    // A point planted inside the dilated near patch trips the clearance check.
    ObstacleSet blocker;
    blocker.points.push_back(Vec3(0.5, 0.5, 1.1));
    CHECK_THROWS_AS(stretch(C, apex, -0.3, blocker), Error);
}

TEST_CASE("negative range bisection finds the blocking level") {
    const Polytope C = tst::make_frustum();
    const Vec3 tip = tst::frustum_tip();
    // The near plane moves down as s decreases; a point just below the top
    // facet caps the range. Top plane sits at z = 2 - t with t = sqrt(1-s).
    ObstacleSet obstacles;
    obstacles.points.push_back(Vec3(0.0, 0.0, 0.9));
    const double s_min = negative_range(C, tip, obstacles);
    // Blocked when 2 - sqrt(1-s) <= 0.9, i.e. s <= 1 - 1.21 = -0.21.
    CHECK(s_min == doctest::Approx(-0.21).epsilon(1e-6));
    CHECK_NOTHROW(stretch(C, tip, s_min + 1e-4, obstacles));
    CHECK_THROWS_AS(stretch(C, tip, s_min - 1e-4, obstacles), Error);
}

TEST_CASE("family validation catches broken configurations") {
    NoseFamily fam = tst::cube_two_apex_family();
    CHECK_NOTHROW(validate_family(fam));

    NoseFamily inside = fam;
    inside.apexes[0] = Vec3(0.5, 0.5, 0.5);
    CHECK_THROWS_AS(validate_family(inside), Error);

    NoseFamily coincident = fam;
    coincident.apexes[1] = coincident.apexes[0];
    CHECK_THROWS_AS(validate_family(coincident), Error);

    // Both apexes on the same side: their segment misses the interior.
    NoseFamily sameside = fam;
    sameside.apexes[1] = Vec3(0.5, 0.5, 2.5);
    try {
        validate_family(sameside);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FamilyInvariantViolated);
    }
}

TEST_CASE("multi stretch covers its hull and keeps measures linear") {
    for (const NoseFamily& fam :
         {tst::cube_two_apex_family(), tst::random_two_apex_family(1234)}) {
        const std::vector<double> s_vec = {0.7, 0.4};
        const Polytope big = multi_stretch(fam, s_vec);
        validate_polytope(big);
        const double gap = multi_stretch_hull_gap(fam, s_vec, 2000, 5);
        CHECK(gap <= 1e-7 * fam.C.diameter());

        const auto cones = check_cone_disjointness(fam, 25, 6);
        CHECK(cones.violations == 0);
        CHECK(cones.min_near_near > 0.0);

        const std::vector<std::vector<double>> s_grid = {
            {0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}, {0.3, 0.6}, {1.0, 1.0}};
        const auto rep = measure_multi_check(fam, classical_law(), s_grid);
        CHECK(rep.max_atom_dev_rel <= 1e-8);
        CHECK(rep.max_F_dev_rel <= 1e-8);
    }
}

TEST_CASE("stationary apex height exists over the cube edge") {
    // Apexes on the vertical line through (0.5, 2): two near facets (top and
    // back). The analytic derivative F(V) - F(near) changes sign between
    // heights 1.05 and 2, so a stationary family exists on that segment.
    const Polytope C = tst::make_cube();
    const PressureLaw law = classical_law();
    auto deriv = [&](double eta) {
        const auto dec = decompose(C, Vec3(0.5, 2.0, eta));
        return eval_functional(law, dec.cone_measure) - eval_functional(law, dec.near_measure);
    };
    CHECK(deriv(1.05) > 0.0);
    CHECK(deriv(2.0) < 0.0);
}
