#include <doctest.h>

#include <random>

#include "supinf/supremand.hpp"

using namespace supinf;

TEST_CASE("pure hessian norm is the Frobenius norm") {
    PureHessianNorm H(2);
    Jet2 jet(Vec(0.0, 0.0), 0.0, Vec(0.0, 0.0), SymMat(3.0, 0.0, 4.0));
    CHECK(H.value(jet) == doctest::Approx(5.0).epsilon(1e-14));

    Jet2 zero(Vec(0.0, 0.0), 0.0, Vec(0.0, 0.0), SymMat::zero(2));
    CHECK(H.value(zero) == 0.0);
    CHECK_THROWS_AS((void)H.partials(zero), non_differentiable_point);
}

TEST_CASE("smoothed norm matches the frozen closed form") {
    SmoothedHessianNorm H(1, 0.1);
    Jet2 jet(Vec(0.0), 0.0, Vec(0.0), SymMat(5.0));
    // sqrt(25 + 0.01) - 0.1
    CHECK(H.value(jet) == doctest::Approx(4.9009999000199950014).epsilon(1e-15));
    CHECK(H.eps() == 0.1);
    // vanishes at X = 0 and stays below the pure norm
    Jet2 zero(Vec(0.0), 0.0, Vec(0.0), SymMat(0.0));
    CHECK(H.value(zero) == 0.0);
    CHECK(H.value(jet) < 5.0);
}

TEST_CASE("squared hessian and trace composition agree") {
    SquaredHessian H(2);
    auto HC = make_hcompose_trace(2);
    Jet2 jet(Vec(0.3, -0.2), 0.7, Vec(1.0, -1.0), SymMat(1.0, 2.0, -0.5));
    CHECK(H.value(jet) == doctest::Approx(HC->value(jet)).epsilon(1e-14));
    // |X|^2 = 1 + 2*4 + 0.25
    CHECK(H.value(jet) == doctest::Approx(9.25).epsilon(1e-14));
}

TEST_CASE("lower-order example couples eta and p") {
    LowerOrderExample H(1, 2.0, 2.0, 1.0);
    Jet2 jet(Vec(0.0), 2.0, Vec(1.0), SymMat(3.0));
    // 9 + 3 / (1 + 4 + 1)
    CHECK(H.value(jet) == doctest::Approx(9.5).epsilon(1e-14));
    CHECK_THROWS_AS((void)H.partials(Jet2(Vec(0.0), 1.0, Vec(1.0), SymMat(0.0))),
                    non_differentiable_point);
}

TEST_CASE("analytic partials match finite differences") {
    std::vector<SupremandPtr> hs = {
        std::make_shared<SmoothedHessianNorm>(1, 1e-2),
        std::make_shared<SmoothedHessianNorm>(2, 1e-2),
        std::make_shared<SquaredHessian>(2),
        std::make_shared<LowerOrderExample>(2, 2.0, 2.0, 0.5),
        make_hcompose_trace(2),
        std::make_shared<PureHessianNorm>(2),
    };
    for (const auto& H : hs) {
        Jet2 jet = (H->dimension() == 1)
                       ? Jet2(Vec(0.4), -0.7, Vec(1.2), SymMat(1.5))
                       : Jet2(Vec(0.4, -0.1), -0.7, Vec(1.2, 0.3), SymMat(1.5, -0.4, 0.8));
        CHECK(check_partials_fd(*H, jet, 1e-6) < 1e-7);
    }
}

TEST_CASE("jet dimension is enforced") {
    SquaredHessian H(2);
    CHECK_THROWS_AS((void)H.value(Jet2(Vec(0.0), 0.0, Vec(0.0), SymMat(1.0))), contract_violation);
}

TEST_CASE("registry parses names and parameters") {
    auto H = make_supremand("smoothed-hessian-norm:eps=0.25", 1);
    CHECK(dynamic_cast<const SmoothedHessianNorm*>(H.get())->eps() == 0.25);
    CHECK(make_supremand("pure-hessian-norm", 2)->name() == "pure-hessian-norm");
    CHECK(make_supremand("squared-hessian", 1)->level_convex_in_X());
    CHECK_THROWS_AS((void)make_supremand("no-such-supremand", 1), contract_violation);
    CHECK_THROWS_AS((void)make_supremand("lower-order:s", 1), contract_violation);
    CHECK_THROWS_AS((void)make_supremand("lower-order:s=abc", 1), contract_violation);
}

TEST_CASE("coercivity metadata holds on random jets") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    SquaredHessian H(2);
    const Coercivity& co = *H.coercivity();
    for (int t = 0; t < 500; ++t) {
        Jet2 jet(Vec(uni(rng), uni(rng)), uni(rng), Vec(uni(rng), uni(rng)),
                 SymMat(uni(rng), uni(rng), uni(rng)));
        double lower = co.C1 * jet.X.frob() - co.C2 * (1.0 + std::pow(std::abs(jet.eta), co.s) +
                                                       std::pow(jet.p.norm(), co.t));
        CHECK(H.value(jet) >= lower - 1e-12);
    }
}
