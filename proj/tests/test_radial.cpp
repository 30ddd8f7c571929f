#include "resist/radial.hpp"

#include "doctest.h"
#include "oracle.hpp"

#include <cmath>
#include <random>

using namespace resist;
namespace tst = resist::testing;

namespace {

RadialProfile profile_from(double M, double L, int N, const std::function<double(double)>& fn) {
    RadialProfile p = uniform_profile(M, L, N);
    for (size_t i = 0; i < p.r.size(); ++i) p.phi[i] = fn(p.r[i]);
    return p;
}

}  // namespace

TEST_CASE("flat and cone resistances are exact") {
    const auto flat = profile_from(1.0, 1.0, 500, [](double) { return 1.0; });
    CHECK(resistance_radial(flat) == doctest::Approx(0.5).epsilon(1e-12));
    const auto cone = profile_from(1.0, 1.0, 500, [](double r) { return 1.0 - r; });
    CHECK(resistance_radial(cone) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("profile validation rejects inadmissible shapes") {
    auto bad_bounds = profile_from(1.0, 1.0, 50, [](double r) { return 1.2 - r; });
    CHECK_THROWS_AS(validate_profile(bad_bounds), Error);
    auto increasing = profile_from(1.0, 1.0, 50, [](double r) { return r; });
    CHECK_THROWS_AS(validate_profile(increasing), Error);
    // Convex bump: slopes decrease outward.
    auto convex = profile_from(1.0, 1.0, 50, [](double r) { return (1.0 - r) * (1.0 - r); });
    CHECK_THROWS_AS(validate_profile(convex), Error);
    const auto good = profile_from(1.0, 1.0, 50, [](double r) { return 1.0 - r * r / 2.0; });
    CHECK_NOTHROW(validate_profile(good));
}

TEST_CASE("projection builds the least concave monotone majorant") {
    // A single spike becomes a plateau followed by a straight ramp.
    RadialProfile p = uniform_profile(1.0, 1.0, 100);
    for (double& v : p.phi) v = 0.0;
    p.phi[50] = 0.6;
    project_profile(p);
    CHECK_NOTHROW(validate_profile(p));
    for (int i = 0; i <= 50; ++i) CHECK(p.phi[i] == doctest::Approx(0.6).epsilon(1e-12));
    for (int i = 50; i <= 100; ++i)
        CHECK(p.phi[i] == doctest::Approx(0.6 * (1.0 - p.r[i]) / 0.5).epsilon(1e-12));

    // Idempotence and domination on random data.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-0.2, 1.2);
    RadialProfile q = uniform_profile(1.0, 1.0, 300);
    for (double& v : q.phi) v = uni(rng);
    RadialProfile raw = q;
    project_profile(q);
    CHECK_NOTHROW(validate_profile(q));
    for (size_t i = 0; i < q.phi.size(); ++i) {
        const double clamped = std::clamp(raw.phi[i], 0.0, 1.0);
        CHECK(q.phi[i] >= clamped - 1e-12);
    }
    RadialProfile twice = q;
    project_profile(twice);
    for (size_t i = 0; i < q.phi.size(); ++i)
        CHECK(twice.phi[i] == doctest::Approx(q.phi[i]).epsilon(1e-14).scale(1.0));
}

TEST_CASE("oracle certifies its own optimality gap") {
    const auto oracle = tst::radial_oracle(1.0, 1.0, 5000);
    CHECK(oracle.gap_rel <= 1e-6);
    CHECK(oracle.resistance > 0.0);
    CHECK(oracle.resistance < 0.25);  // beats the slope-1 cone
    // The oracle profile is admissible for the primal problem.
    RadialProfile p;
    p.M = 1.0;
    p.L = 1.0;
    p.r = oracle.r;
    p.phi = oracle.phi;
    CHECK_NOTHROW(validate_profile(p, 1e-7));
    CHECK(resistance_radial(p) == doctest::Approx(oracle.resistance).epsilon(1e-9));
}

TEST_CASE("solver approaches the oracle as the grid refines") {
    const double star = tst::radial_oracle(1.0, 1.0, 20000).resistance;
    SolveRadialOptions opts;
    opts.multistart = 3;
    opts.max_gradient_iters = 200;
    double prev = 1e30;
    for (int N : {125, 250, 500}) {
        const RadialProfile p = solve_radial(1.0, 1.0, N, opts);
        CHECK_NOTHROW(validate_profile(p));
        const double err = std::abs(resistance_radial(p) - star) / star;
        CHECK(err < prev * 1.05);  // refinement never makes it meaningfully worse
        prev = err;
    }
    CHECK(prev <= 4e-3);
}

TEST_CASE("solved profiles satisfy the structural optimality signs") {
    SolveRadialOptions opts;
    opts.multistart = 4;
    std::vector<RadialTraceRow> trace;
    opts.trace = &trace;
    const RadialProfile p = solve_radial(1.0, 1.0, 600, opts);
    CHECK(p.phi.back() == 0.0);                  // rim pinned at zero
    CHECK(p.phi.front() == doctest::Approx(1.0).epsilon(1e-9));  // full height used
    CHECK(resistance_radial(p) < 0.25);
    // The trace never increases within a start; each multistart run opens
    // its own monotone segment.
    for (size_t i = 1; i < trace.size(); ++i)
        if (trace[i].step != "start")
            CHECK(trace[i].objective <= trace[i - 1].objective + 1e-12);
    // Slopes avoid the open band (0, 1): flat top then slopes >= 1.
    const double tiny = 1e-8;
    for (int j = 0; j < p.cells(); ++j) {
        const double k = p.slope(j);
        CHECK((k <= tiny || k >= 1.0 - 1e-3));
    }
}

TEST_CASE("taller bodies resist less") {
    SolveRadialOptions opts;
    opts.multistart = 3;
    opts.max_gradient_iters = 150;
    const double r1 = resistance_radial(solve_radial(0.5, 1.0, 300, opts));
    const double r2 = resistance_radial(solve_radial(1.0, 1.0, 300, opts));
    const double r3 = resistance_radial(solve_radial(2.0, 1.0, 300, opts));
    CHECK(r2 < r1);
    CHECK(r3 < r2);
}
