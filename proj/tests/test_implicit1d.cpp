#include <doctest.h>

#include "supinf/implicit1d.hpp"
#include "supinf/supremand.hpp"

using namespace supinf;

TEST_CASE("level inversion is consistent with the identity profile") {
    auto prof = make_identity_profile();
    CHECK(invert_level(prof, 0.0, 0.0, 0.0, 3.0) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(invert_level(prof, 0.5, 1.0, -1.0, 0.25) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("level inversion reports structural failures") {
    MonotoneProfile shifted{[](double, double, double, double S) { return S + 5.0; }, 1e-2, "shifted"};
    CHECK_THROWS_AS((void)invert_level(shifted, 0.0, 0.0, 0.0, 1.0), contract_violation);
    MonotoneProfile bounded{[](double, double, double, double S) { return S / (1.0 + S); }, 1e-2,
                            "bounded"};
    CHECK_THROWS_AS((void)invert_level(bounded, 0.0, 0.0, 0.0, 2.0), contract_violation);
}

TEST_CASE("monotonicity certificate accepts and rejects correctly") {
    CHECK(certify_monotone(make_identity_profile(), 0.0, 1.0, 1.0, 1.0, 4.0));
    MonotoneProfile flat{[](double, double, double, double) { return 1.0; }, 1e-2, "flat"};
    CHECK(!certify_monotone(flat, 0.0, 1.0, 1.0, 1.0, 4.0));
}

TEST_CASE("energy level threshold dominates the data energy") {
    auto prof = make_identity_profile();
    auto zero = [](double) { return 0.0; };
    double C = energy_level_threshold(prof, 0.0, 1.0, zero, zero, zero);
    // floor term: h at delta0 = 1e-2; data term: h(1 + 0) = 1
    CHECK(C == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trivial data yields the quarter-point two-switch profile") {
    for (int s0 : {1, -1}) {
        auto sol = construct_bang_bang(make_identity_profile(), 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0,
                                       201, s0);
        REQUIRE(sol.switches.size() == 2);
        CHECK(sol.switches[0] == doctest::Approx(0.25).epsilon(1e-9));
        CHECK(sol.switches[1] == doctest::Approx(0.75).epsilon(1e-9));
        CHECK(sol.endpoint_residual < 1e-10);
        CHECK(sol.sign0 == s0);
        CHECK(verify_implicit(make_identity_profile(), sol) < 1e-10);
    }
}

TEST_CASE("the two-switch profile attains the prescribed energy level") {
    auto sol = construct_bang_bang(make_identity_profile(), 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 201, 1);
    SquaredHessian H(1);
    // identity profile with S = (u'')^2 means H(J^2 u) = |u''|^2 = C a.e.
    CHECK(sup_energy(H, sol.u) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("auto sign picks a working pattern") {
    auto sol = construct_bang_bang(make_identity_profile(), 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 201, 0);
    CHECK((sol.sign0 == 1 || sol.sign0 == -1));
    CHECK(sol.endpoint_residual < 1e-10);
}

TEST_CASE("JSON summary exposes level, switches and residual") {
    auto sol = construct_bang_bang(make_identity_profile(), 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 201, 1);
    std::string j = bang_bang_json(sol);
    CHECK(j.find("\"C\": 1") != std::string::npos);
    CHECK(j.find("\"switches\"") != std::string::npos);
    CHECK(j.find("\"endpoint_residual\"") != std::string::npos);
    CHECK(j.find("\"sign0\": 1") != std::string::npos);
}
