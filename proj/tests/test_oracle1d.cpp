#include <doctest.h>

#include <random>

#include "supinf/oracle1d.hpp"

using namespace supinf;

TEST_CASE("cubic Hermite interpolation hits its clamped data") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int t = 0; t < 50; ++t) {
        double a = uni(rng), b = a + 0.3 + std::abs(uni(rng));
        double A = uni(rng), Ap = uni(rng), B = uni(rng), Bp = uni(rng);
        auto q = cubic_hermite(a, b, A, Ap, B, Bp);
        CHECK(std::abs(q.value(a) - A) < 1e-12);
        CHECK(std::abs(q.deriv(a) - Ap) < 1e-12);
        CHECK(std::abs(q.value(b) - B) < 1e-12);
        CHECK(std::abs(q.deriv(b) - Bp) < 1e-12);
    }
    CHECK_THROWS_AS((void)cubic_hermite(1.0, 0.0, 0, 0, 0, 0), contract_violation);
}

TEST_CASE("bench data has the known two-piece profile") {
    auto u = absolute_minimizer_pure(0.0, 1.0, 0.0, 0.0, 1.0, 0.0);
    REQUIRE(u.breakpoints.size() == 3);
    CHECK(u.breakpoints[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(u.sup_curvature() == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(u.curvature[0] == doctest::Approx(4.0));
    CHECK(u.curvature[1] == doctest::Approx(-4.0));
    // profile value at the switch
    CHECK(u.value(0.5) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("quadratic-compatible data returns the quadratic itself") {
    // u = x^2 on [0,1]: data (0, 0, 1, 2)
    auto u = absolute_minimizer_pure(0.0, 1.0, 0.0, 0.0, 1.0, 2.0);
    REQUIRE(u.curvature.size() == 1);
    CHECK(u.curvature[0] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(u.value(0.7) == doctest::Approx(0.49).epsilon(1e-13));
}

TEST_CASE("two-piece profile always matches the right endpoint state") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int t = 0; t < 200; ++t) {
        double a = uni(rng), b = a + 0.3 + std::abs(uni(rng));
        double A = uni(rng), Ap = uni(rng), B = uni(rng), Bp = uni(rng);
        auto u = absolute_minimizer_pure(a, b, A, Ap, B, Bp);
        auto [vb, sb] = u.state(b);
        double scale = 1.0 + std::abs(B) + std::abs(Bp);
        CHECK(std::abs(vb - B) < 1e-11 * scale);
        CHECK(std::abs(sb - Bp) < 1e-11 * scale);
        // switch stays strictly inside
        for (std::size_t j = 1; j + 1 < u.breakpoints.size(); ++j) {
            CHECK(u.breakpoints[j] > a);
            CHECK(u.breakpoints[j] < b);
        }
    }
}

TEST_CASE("bump profile satisfies its endpoint conditions") {
    CHECK(bump_zeta(0.0) == 0.0);
    CHECK(bump_zeta_d(0.0) == 0.0);
    CHECK(bump_zeta_dd(0.0) == 0.0);
    CHECK(std::abs(bump_zeta(1.0)) < 1e-15);
    CHECK(std::abs(bump_zeta_d(1.0)) < 1e-15);
    CHECK(bump_zeta_dd(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    // derivative consistency by central differences
    for (double t : {0.2, 0.5, 0.8}) {
        double h = 1e-6;
        CHECK((bump_zeta(t + h) - bump_zeta(t - h)) / (2 * h) ==
              doctest::Approx(bump_zeta_d(t)).epsilon(1e-8));
        CHECK((bump_zeta_d(t + h) - bump_zeta_d(t - h)) / (2 * h) ==
              doctest::Approx(bump_zeta_dd(t)).epsilon(1e-8));
    }
}

TEST_CASE("radial bump rejects balls touching the boundary") {
    Grid g = Grid::interval(0.0, 1.0, 41);
    CHECK_THROWS_AS((void)radial_bump(Vec(0.1), 0.2, g), contract_violation);
    auto phi = radial_bump(Vec(0.5), 0.3, g);
    CHECK(phi.values.front() == 0.0);
    CHECK(phi.values.back() == 0.0);
    double mx = 0.0;
    for (double v : phi.values) mx = std::max(mx, std::abs(v));
    CHECK(mx > 0.0);
}

TEST_CASE("the closed-form profile survives random minimality challenges") {
    SmoothedHessianNorm H(1, 1e-9);
    Grid g = Grid::interval(0.0, 1.0, 201);
    auto u = absolute_minimizer_pure(0.0, 1.0, 0.0, 0.0, 1.0, 0.0).sample(g);
    auto rep = check_absolute_minimality(H, u, 60, 5150, 3.0 * g.h(0));
    CHECK(rep.trials == 60);
    CHECK(rep.violations.empty());
}

TEST_CASE("a strictly suboptimal profile is caught by the checker") {
    SmoothedHessianNorm H(1, 1e-9);
    Grid g = Grid::interval(0.0, 1.0, 201);
    auto u = cubic_hermite(0.0, 1.0, 0.0, 0.0, 1.0, 0.0).sample(g);
    auto rep = check_absolute_minimality(H, u, 60, 5150, 3.0 * g.h(0));
    CHECK(!rep.violations.empty());
}

TEST_CASE("argmax band derivative data is well defined on the bench profile") {
    SmoothedHessianNorm H(1, 1e-9);
    Grid g = Grid::interval(0.0, 1.0, 201);
    auto u = absolute_minimizer_pure(0.0, 1.0, 0.0, 0.0, 1.0, 0.0).sample(g);
    auto phi = radial_bump(Vec(0.5), 0.2, g);
    auto [hi, lo] = danskin_check(H, u, 20, 180, phi.values, 5.0 * g.h(0));
    CHECK(hi >= lo);
    CHECK(hi >= -1e-3);   // max L(phi)
    CHECK(-lo >= -1e-3);  // max L(-phi)
    CHECK_THROWS_AS((void)danskin_check(H, u, 0, 180, phi.values, 0.1), contract_violation);
}
