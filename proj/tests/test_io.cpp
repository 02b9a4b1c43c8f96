#include <doctest.h>

#include <cstdio>
#include <random>

#include "supinf/io.hpp"

using namespace supinf;

TEST_CASE("doubles format with shortest round-trip representation") {
    for (double x : {0.1, -3.25, 1e-300, 62208.0, 4.781412371462676}) {
        CHECK(std::stod(fmt_double(x)) == x);
    }
    CHECK(fmt_double(0.5) == "0.5");
    CHECK(fmt_double(-2.0) == "-2");
}

TEST_CASE("1D function round-trips through CSV exactly") {
    Grid g = Grid::interval(-0.5, 2.0, 33);
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> uni(-5.0, 5.0);
    std::vector<double> vals(static_cast<std::size_t>(g.total_nodes()));
    for (double& v : vals) v = uni(rng);
    DiscreteFunction u(g, vals, BoundaryData::clamped1d(vals.front(), 0.7, vals.back(), -1.3));

    const char* path = "io_test_tmp_1d.csv";
    write_function(u, path);
    DiscreteFunction back = read_function(path);
    REQUIRE(back.grid.n == 1);
    CHECK(back.grid.m[0] == g.m[0]);
    CHECK(back.grid.a[0] == doctest::Approx(g.a[0]).epsilon(1e-15));
    CHECK(back.grid.b[0] == doctest::Approx(g.b[0]).epsilon(1e-15));
    for (std::size_t i = 0; i < u.values.size(); ++i) CHECK(back.values[i] == u.values[i]);
    CHECK(back.boundary.slope_xmin.at(0) == u.boundary.slope_xmin.at(0));
    CHECK(back.boundary.slope_xmax.at(0) == u.boundary.slope_xmax.at(0));
    std::remove(path);
    std::remove((std::string(path) + ".boundary.json").c_str());
}

TEST_CASE("2D function round-trips through CSV exactly") {
    Grid g = Grid::rectangle(0.0, 1.0, 7, -1.0, 1.0, 9);
    auto f = [](const Vec& v) { return v[0] * v[0] - 0.5 * v[1]; };
    auto df = [](const Vec& v) { return Vec(2.0 * v[0], -0.5); };
    auto u = DiscreteFunction::from_function(g, f, df);

    const char* path = "io_test_tmp_2d.csv";
    write_function(u, path);
    DiscreteFunction back = read_function(path);
    REQUIRE(back.grid.n == 2);
    CHECK(back.grid.m[0] == 7);
    CHECK(back.grid.m[1] == 9);
    for (std::size_t i = 0; i < u.values.size(); ++i) CHECK(back.values[i] == u.values[i]);
    CHECK(back.boundary.slope_ymin == u.boundary.slope_ymin);
    CHECK(back.boundary.trace_xmax == u.boundary.trace_xmax);
    std::remove(path);
    std::remove((std::string(path) + ".boundary.json").c_str());
}

TEST_CASE("missing files raise errors") {
    CHECK_THROWS((void)read_function("definitely_not_here.csv"));
}
