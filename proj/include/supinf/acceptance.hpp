#pragma once

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aronsson.hpp"
#include "implicit1d.hpp"
#include "lp_solver.hpp"
#include "oracle1d.hpp"
#include "young.hpp"

namespace supinf::acceptance {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace detail {

inline std::string num(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// Shared fixture: smoothed-norm continuation on the bench problem
// (0,0) -> (1,0) clamped data on [0,1], whose exact limit has sup energy 4.
struct BenchContinuation {
    ContinuationResult result;
    SupremandPtr H;
    Grid grid;
    BoundaryData bd;
};

inline const BenchContinuation& bench_continuation() {
    static BenchContinuation bc = [] {
        BenchContinuation b;
        b.H = std::make_shared<SmoothedHessianNorm>(1, 1e-3);
        b.grid = Grid::interval(0.0, 1.0, 401);
        b.bd = BoundaryData::clamped1d(0.0, 0.0, 1.0, 0.0);
        SolverOptions opts;
        opts.gtol = 1e-7;
        opts.max_iterations = 50000;
        b.result = continuation(b.H, b.grid, b.bd,
                                {4, 8, 16, 32, 64, 128, 256, 512, 1024}, opts);
        return b;
    }();
    return bc;
}

inline BangBangSolution zigzag_fixture(int sign0) {
    return construct_bang_bang(make_identity_profile(), 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 401,
                               sign0);
}

}  // namespace detail

// 1. Closed-form minimizer vs. brute-force optimization on the bench data.
inline CriterionResult criterion_1() {
    CriterionResult r{"01-oracle-vs-brute-force"};
    auto u = absolute_minimizer_pure(0.0, 1.0, 0.0, 0.0, 1.0, 0.0);
    double s = u.sup_curvature();
    double c = u.breakpoints.size() == 3 ? u.breakpoints[1] : std::nan("");
    bool closed_form_ok = std::abs(s - 4.0) < 1e-12 && std::abs(c - 0.5) < 1e-12;

    SupremandPtr H = std::make_shared<SmoothedHessianNorm>(1, 1e-3);
    Grid g = Grid::interval(0.0, 1.0, 201);
    BoundaryData bd = BoundaryData::clamped1d(0.0, 0.0, 1.0, 0.0);
    SolverOptions opts;
    opts.gtol = 1e-7;
    auto cont = continuation(H, g, bd, {4, 16, 64, 256, 1024}, opts);
    double brute = cont.steps.back().report.final_einf;
    double rel = std::abs(brute - s) / s;
    r.pass = closed_form_ok && rel <= 0.02;
    r.detail = "s=" + detail::num(s) + " c=" + detail::num(c) + " brute=" + detail::num(brute) +
               " rel=" + detail::num(rel);
    return r;
}

// 2. Increasing-exponent continuation: limit energy, monotone diagonal,
// competitor bound.
inline CriterionResult criterion_2() {
    CriterionResult r{"02-continuation-energy"};
    const auto& bc = detail::bench_continuation();
    double final_sup = bc.result.steps.back().report.final_einf;
    bool range_ok = final_sup >= 3.84 && final_sup <= 4.16;
    bool monotone = true, bounded = true;
    double bound = 1.0 + bc.result.einf_boundary_extension;
    for (std::size_t i = 0; i < bc.result.steps.size(); ++i) {
        if (i > 0 && bc.result.steps[i].diagonal < bc.result.steps[i - 1].diagonal - 1e-6)
            monotone = false;
        if (bc.result.steps[i].diagonal > bound) bounded = false;
    }
    r.pass = range_ok && monotone && bounded;
    r.detail = "final_sup=" + detail::num(final_sup) + " monotone=" + std::to_string(monotone) +
               " bound=" + detail::num(bound) + " bounded=" + std::to_string(bounded);
    return r;
}

// 3. Quadratic-compatible data is reproduced exactly at every exponent.
inline CriterionResult criterion_3() {
    CriterionResult r{"03-quadratic-reproduction"};
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        double a = uni(rng), L = 0.5 + 0.75 * (uni(rng) + 1.0), b = a + L;
        double A = 2.0 * uni(rng), Ap = 2.0 * uni(rng), k = 2.0 * uni(rng);
        auto quad = [&](double x) { return A + Ap * (x - a) + 0.5 * k * (x - a) * (x - a); };
        auto dquad = [&](double x) { return Ap + k * (x - a); };
        Grid g = Grid::interval(a, b, 101);
        BoundaryData bd = BoundaryData::clamped1d(A, Ap, quad(b), dquad(b));
        SupremandPtr H = std::make_shared<SquaredHessian>(1);
        SolverOptions opts;
        opts.gtol = 1e-8;
        auto cont = continuation(H, g, bd, {4, 16, 64}, opts);
        for (const auto& st : cont.steps)
            for (int i = 0; i < g.m[0]; ++i)
                worst = std::max(worst,
                                 std::abs(st.u.values[static_cast<std::size_t>(i)] -
                                          quad(g.a[0] + i * g.h(0))));
    }
    r.pass = worst < 1e-6;
    r.detail = "max_nodal_error=" + detail::num(worst);
    return r;
}

// 4. The contracted operator residual of the p-minimizers decays like a power
// of p with exponent in [-1.5, -0.5].
inline CriterionResult criterion_4() {
    CriterionResult r{"04-residual-decay-rate"};
    const auto& bc = detail::bench_continuation();
    std::vector<double> lx, ly;
    for (const auto& st : bc.result.steps) {
        if (st.p < 16.0) continue;
        auto res = aronsson_residuals(*bc.H, st.u);
        double m = res.max_abs_contracted();
        if (m <= 0.0) continue;
        lx.push_back(std::log(st.p));
        ly.push_back(std::log(m));
    }
    double n = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    r.pass = lx.size() >= 4 && slope >= -1.5 && slope <= -0.5;
    r.detail = "slope=" + detail::num(slope) + " points=" + std::to_string(lx.size());
    return r;
}

// 5. Contracted and expanded realizations agree: exact cubic benchmark and
// first-order shrinking discrepancy on a transcendental field.
inline CriterionResult criterion_5() {
    CriterionResult r{"05-operator-realizations"};
    SupremandPtr H = std::make_shared<SquaredHessian>(1);

    Grid g = Grid::interval(0.0, 1.0, 801);
    auto cube = DiscreteFunction::from_function(
        g, [](const Vec& v) { return v[0] * v[0] * v[0]; },
        [](const Vec& v) { return Vec(3.0 * v[0] * v[0]); });
    auto res = aronsson_residuals(*H, cube);
    int i_half = g.index(400);  // x = 0.5
    double expect = 62208.0 * 0.125;
    double rel_c = std::abs(res.contracted[static_cast<std::size_t>(i_half)] - expect) / expect;
    double rel_e = std::abs(res.expanded[static_cast<std::size_t>(i_half)] - expect) / expect;

    auto sine = [](const Grid& gg) {
        return DiscreteFunction::from_function(
            gg, [](const Vec& v) { return std::sin(v[0]); },
            [](const Vec& v) { return Vec(std::cos(v[0])); });
    };
    Grid g1 = Grid::interval(0.2, 1.2, 201), g2 = Grid::interval(0.2, 1.2, 401);
    double d1 = aronsson_residuals(*H, sine(g1)).max_discrepancy();
    double d2 = aronsson_residuals(*H, sine(g2)).max_discrepancy();
    double ratio = d2 / d1;

    r.pass = rel_c <= 0.02 && rel_e <= 0.02 && ratio >= 0.35 && ratio <= 0.65;
    r.detail = "rel_c=" + detail::num(rel_c) + " rel_e=" + detail::num(rel_e) +
               " halving_ratio=" + detail::num(ratio);
    return r;
}

// 6. The closed-form profile survives 500 random minimality challenges; a
// clamped cubic with the same data does not.
inline CriterionResult criterion_6() {
    CriterionResult r{"06-minimality-challenges"};
    SupremandPtr H = std::make_shared<SmoothedHessianNorm>(1, 1e-9);
    Grid g = Grid::interval(0.0, 1.0, 401);
    double tol = 3.0 * g.h(0);

    auto u = absolute_minimizer_pure(0.0, 1.0, 0.0, 0.0, 1.0, 0.0).sample(g);
    auto rep = check_absolute_minimality(*H, u, 500, 777, tol);

    auto control = cubic_hermite(0.0, 1.0, 0.0, 0.0, 1.0, 0.0).sample(g);
    auto rep_c = check_absolute_minimality(*H, control, 500, 777, tol);

    r.pass = rep.violations.empty() && !rep_c.violations.empty();
    r.detail = "violations=" + std::to_string(rep.violations.size()) +
               " worst_margin=" + detail::num(rep.worst_margin) +
               " control_violations=" + std::to_string(rep_c.violations.size());
    return r;
}

// 7. Directional-derivative sign condition over the argmax band.
inline CriterionResult criterion_7() {
    CriterionResult r{"07-argmax-band-derivative"};
    SupremandPtr H = std::make_shared<SmoothedHessianNorm>(1, 1e-9);
    Grid g = Grid::interval(0.0, 1.0, 401);
    auto u = absolute_minimizer_pure(0.0, 1.0, 0.0, 0.0, 1.0, 0.0).sample(g);
    int m = g.m[0];
    double band = 5.0 * g.h(0);

    double worst = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> pick(1, m - 2);
    for (int t = 0; t < 100; ++t) {
        int i1 = pick(rng), i2 = pick(rng);
        if (i1 > i2) std::swap(i1, i2);
        if (i2 - i1 < 10) {
            i2 = std::min(m - 2, i1 + 10);
            i1 = std::max(1, i2 - 10);
        }
        auto phi = supinf::detail::random_perturbation(g, i1, i2, rng, 1.0);
        auto [hi, lo] = danskin_check(*H, u, i1, i2, phi, band);
        worst = std::min(worst, std::min(hi, -lo));  // max L(phi) and max L(-phi)
    }
    r.pass = worst >= -1e-3;
    r.detail = "min_over_trials_of_max=" + detail::num(worst);
    return r;
}

// 8. Level-set two-switch construction on trivial data: exact switch points,
// endpoint match, and pointwise level verification for both leading signs.
inline CriterionResult criterion_8() {
    CriterionResult r{"08-level-set-construction"};
    bool ok = true;
    std::string d;
    for (int s0 : {1, -1}) {
        auto sol = detail::zigzag_fixture(s0);
        double e1 = std::abs(sol.switches[0] - 0.25), e2 = std::abs(sol.switches[1] - 0.75);
        double dev = verify_implicit(make_identity_profile(), sol);
        bool this_ok = e1 <= 1e-8 && e2 <= 1e-8 && sol.endpoint_residual < 1e-8 && dev < 1e-10;
        ok = ok && this_ok;
        d += "sign" + std::to_string(s0) + ":switch_err=" + detail::num(std::max(e1, e2)) +
             ",endpoint=" + detail::num(sol.endpoint_residual) + ",dev=" + detail::num(dev) + " ";
    }
    r.pass = ok;
    r.detail = d;
    return r;
}

// 9. Generalized-solution criterion on the two-switch profile, plus the
// factorization identity between the operator realizations.
inline CriterionResult criterion_9() {
    CriterionResult r{"09-generalized-solution"};
    auto sol = detail::zigzag_fixture(1);
    SupremandPtr H = std::make_shared<SquaredHessian>(1);
    YoungOptions opts;
    auto rep = dsolution_criterion(*H, sol.u, opts);
    double rate = rep.pass_rate();

    const Grid& g = sol.u.grid;
    bool confined = true;
    for (const auto& v : rep.nodes) {
        if (!v.admissible || v.pass) continue;
        double x = g.position(v.node)[0];
        double dist = std::min(std::abs(x - 0.25), std::abs(x - 0.75));
        if (dist > 2.0 * g.h(0) + 1e-12) confined = false;
    }

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    double worst_fact = 0.0;
    for (int t = 0; t < 100; ++t) {
        Jet2 jet(Vec(uni(rng)), uni(rng), Vec(uni(rng)), SymMat(uni(rng)));
        double Z = uni(rng);
        auto [A, L] = expanded_operator_1d(*H, jet, Z);
        SupremandGradient gr = H->partials(jet);
        double A2 = gr.d_X.mul(Vec(L)).dot(Vec(L));
        worst_fact = std::max(worst_fact, std::abs(A - A2) / (1.0 + std::abs(A)));
    }

    r.pass = rate >= 0.95 && confined && worst_fact <= 1e-12;
    r.detail = "pass_rate=" + detail::num(rate) + " confined=" + std::to_string(confined) +
               " factorization=" + detail::num(worst_fact);
    return r;
}

// 10. Library-wide property suites: analytic partials vs finite differences,
// exact max-domination of level-convex supremands on discrete measures,
// exponent monotonicity of shifted power means, and declared coercivity.
inline CriterionResult criterion_10() {
    CriterionResult r{"10-property-suites"};
    std::mt19937_64 rng(1357);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    auto random_jet = [&](int dim) {
        if (dim == 1) return Jet2(Vec(uni(rng)), uni(rng), Vec(uni(rng)), SymMat(uni(rng) + 2.5));
        return Jet2(Vec(uni(rng), uni(rng)), uni(rng), Vec(uni(rng), uni(rng)),
                    SymMat(uni(rng) + 2.5, uni(rng), uni(rng) + 2.5));
    };

    std::vector<SupremandPtr> instances;
    for (int dim : {1, 2}) {
        instances.push_back(std::make_shared<PureHessianNorm>(dim));
        instances.push_back(std::make_shared<SmoothedHessianNorm>(dim, 1e-3));
        instances.push_back(std::make_shared<SquaredHessian>(dim));
        instances.push_back(std::make_shared<LowerOrderExample>(dim, 1.5, 1.5, 0.7));
        instances.push_back(make_hcompose_trace(dim));
    }
    double worst_fd = 0.0;
    for (const auto& H : instances)
        for (int t = 0; t < 100; ++t)
            worst_fd = std::max(worst_fd, check_partials_fd(*H, random_jet(H->dimension()), 1e-6));
    bool fd_ok = worst_fd < 1e-5;

    // max-domination (level-convexity consequence) on random discrete measures
    SmoothedHessianNorm F(2, 0.5);
    double worst_jensen = -std::numeric_limits<double>::infinity();
    std::uniform_int_distribution<int> natoms(2, 6);
    std::uniform_real_distribution<double> upos(0.05, 1.0);
    auto fval = [&](const SymMat& X) {
        return F.value(Jet2(Vec(0.0, 0.0), 0.0, Vec(0.0, 0.0), X));
    };
    for (int t = 0; t < 10000; ++t) {
        int k = natoms(rng);
        SymMat mean = SymMat::zero(2);
        double wsum = 0.0, fmax = -std::numeric_limits<double>::infinity();
        std::vector<std::pair<SymMat, double>> atoms;
        for (int j = 0; j < k; ++j) atoms.push_back({SymMat(3.0 * uni(rng) / 2.0, uni(rng), uni(rng)), upos(rng)});
        for (auto& [X, w] : atoms) wsum += w;
        for (auto& [X, w] : atoms) {
            mean += X * (w / wsum);
            fmax = std::max(fmax, fval(X));
        }
        worst_jensen = std::max(worst_jensen, fval(mean) - fmax);
    }
    bool jensen_ok = worst_jensen <= 1e-12;

    // exponent monotonicity of the shifted power mean
    double worst_mono = -std::numeric_limits<double>::infinity();
    std::uniform_int_distribution<int> flen(20, 100);
    std::uniform_real_distribution<double> fv(0.0, 5.0), pe(1.0, 64.0);
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> f(static_cast<std::size_t>(flen(rng)));
        for (double& x : f) x = fv(rng);
        double p1 = pe(rng), p2 = pe(rng);
        if (p1 > p2) std::swap(p1, p2);
        if (p2 - p1 < 1e-6) p2 += 1.0;
        worst_mono = std::max(worst_mono, shifted_power_mean(f, {}, p1, 1.0) -
                                              shifted_power_mean(f, {}, p2, 1.0));
    }
    bool mono_ok = worst_mono <= 1e-12;

    // declared coercivity: H >= C1|X| - C2(1 + |eta|^s + |p|^t)
    double worst_coer = -std::numeric_limits<double>::infinity();
    for (const auto& H : instances) {
        if (!H->coercivity()) continue;
        const Coercivity& co = *H->coercivity();
        for (int t = 0; t < 10000; ++t) {
            Jet2 jet = random_jet(H->dimension());
            double lower = co.C1 * jet.X.frob() -
                           co.C2 * (1.0 + std::pow(std::abs(jet.eta), co.s) +
                                    std::pow(jet.p.norm(), co.t));
            worst_coer = std::max(worst_coer, lower - H->value(jet));
        }
    }
    bool coer_ok = worst_coer <= 1e-12;

    r.pass = fd_ok && jensen_ok && mono_ok && coer_ok;
    r.detail = "fd=" + detail::num(worst_fd) + " jensen=" + detail::num(worst_jensen) +
               " mono=" + detail::num(worst_mono) + " coercivity=" + detail::num(worst_coer);
    return r;
}

inline std::vector<CriterionResult> run_all() {
    using Fn = CriterionResult (*)();
    Fn fns[] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
    std::vector<CriterionResult> out;
    for (Fn f : fns) {
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = f();
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace supinf::acceptance
