#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "supinf/implicit1d.hpp"
#include "supinf/young.hpp"

using namespace supinf;

namespace {

DiscreteFunction cube_on(const Grid& g) {
    return DiscreteFunction::from_function(
        g, [](const Vec& v) { return v[0] * v[0] * v[0]; },
        [](const Vec& v) { return Vec(3.0 * v[0] * v[0]); });
}

}  // namespace

TEST_CASE("cubic field: all quotient atoms merge at the third derivative") {
    Grid g = Grid::interval(0.0, 1.0, 101);
    auto diffuse = difference_quotients(cube_on(g), {});
    int admissible = 0;
    for (const auto& nd : diffuse) {
        if (!nd.admissible) continue;
        ++admissible;
        // boundary jets are only quadratic-exact; skip stencils touching them
        if (nd.node == 0 || nd.node + 8 >= g.m[0] - 1) continue;
        REQUIRE(nd.atoms.size() == 1);
        CHECK(nd.atoms[0].value == doctest::Approx(6.0).epsilon(1e-9));
        CHECK(nd.atoms[0].mass == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(nd.escaped_mass == 0.0);
    }
    CHECK(admissible == 101 - 8);
}

TEST_CASE("quadratic fields satisfy the solution criterion everywhere") {
    Grid g = Grid::interval(-1.0, 1.0, 101);
    SquaredHessian H(1);
    auto u = DiscreteFunction::from_function(
        g, [](const Vec& v) { return v[0] * v[0]; }, [](const Vec& v) { return Vec(2.0 * v[0]); });
    auto rep = dsolution_criterion(H, u, {});
    CHECK(rep.admissible > 0);
    CHECK(rep.pass_rate() == doctest::Approx(1.0));
}

TEST_CASE("the cubic is correctly rejected as a solution") {
    Grid g = Grid::interval(0.5, 1.5, 101);
    SquaredHessian H(1);
    auto rep = dsolution_criterion(H, cube_on(g), {});
    CHECK(rep.pass_rate() < 0.05);
}

TEST_CASE("two-switch profile: jump quotients escape, finite atoms vanish") {
    auto sol = construct_bang_bang(make_identity_profile(), 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 201, 1);
    SquaredHessian H(1);
    auto rep = dsolution_criterion(H, sol.u, {});
    CHECK(rep.pass_rate() == doctest::Approx(1.0));
    double total_escaped = 0.0;
    for (const auto& v : rep.nodes) total_escaped += v.escaped_mass;
    CHECK(total_escaped > 0.0);  // the curvature jumps are visible as escaped mass
}

TEST_CASE("factorization identity between realizations of the operator") {
    SquaredHessian H(1);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    for (int t = 0; t < 200; ++t) {
        Jet2 jet(Vec(uni(rng)), uni(rng), Vec(uni(rng)), SymMat(uni(rng)));
        double Z = uni(rng);
        auto [A, L] = expanded_operator_1d(H, jet, Z);
        SupremandGradient g = H.partials(jet);
        double direct = g.d_X.mul(Vec(L)).dot(Vec(L));
        CHECK(A == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("option validation") {
    Grid g = Grid::interval(0.0, 1.0, 21);
    auto u = DiscreteFunction::constant(g, 0.0);
    YoungOptions bad;
    bad.step_multiples = {};
    CHECK_THROWS_AS((void)difference_quotients(u, bad), contract_violation);
    bad.step_multiples = {0};
    CHECK_THROWS_AS((void)difference_quotients(u, bad), contract_violation);
}

TEST_CASE("criterion CSV lists admissible nodes with verdicts") {
    Grid g = Grid::interval(0.0, 1.0, 21);
    SquaredHessian H(1);
    auto u = DiscreteFunction::constant(g, 0.0);
    auto rep = dsolution_criterion(H, u, {});
    const char* path = "criterion_test_tmp.csv";
    write_criterion_csv(rep, path);
    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,sup_finite,escaped_mass,pass");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == rep.admissible);
    is.close();
    std::remove(path);
}
