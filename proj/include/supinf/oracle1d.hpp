#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "grid.hpp"

namespace supinf {

// Cubic c0 + c1 x + c2 x^2 + c3 x^3 over [a,b].
struct CubicPolynomial {
    double a = 0.0, b = 1.0;
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

    double value(double x) const { return c[0] + x * (c[1] + x * (c[2] + x * c[3])); }
    double deriv(double x) const { return c[1] + x * (2.0 * c[2] + 3.0 * x * c[3]); }
    double second(double x) const { return 2.0 * c[2] + 6.0 * c[3] * x; }
    double third() const { return 6.0 * c[3]; }

    DiscreteFunction sample(const Grid& g) const {
        return DiscreteFunction::from_function(
            g, [this](const Vec& p) { return value(p[0]); },
            [this](const Vec& p) { return Vec(deriv(p[0])); });
    }
};

// Unique cubic with Q(a)=A, Q(b)=B, Q'(a)=Ap, Q'(b)=Bp.
inline CubicPolynomial cubic_hermite(double a, double b, double A, double Ap, double B, double Bp) {
    if (!(a < b)) throw contract_violation("cubic_hermite: requires a < b");
    double L = b - a;
    // Hermite form in s = (x-a)/L, then expand to monomials in x.
    double d0 = A, d1 = Ap * L;
    double e0 = B, e1 = Bp * L;
    // q(s) = h00 d0 + h10 d1 + h01 e0 + h11 e1 with the standard basis;
    // coefficients of q in powers of s:
    double s0 = d0;
    double s1 = d1;
    double s2 = -3.0 * d0 - 2.0 * d1 + 3.0 * e0 - e1;
    double s3 = 2.0 * d0 + d1 - 2.0 * e0 + e1;
    // substitute s = (x-a)/L
    CubicPolynomial q;
    q.a = a;
    q.b = b;
    double iL = 1.0 / L;
    double k1 = s1 * iL, k2 = s2 * iL * iL, k3 = s3 * iL * iL * iL;
    q.c[0] = s0 - k1 * a + k2 * a * a - k3 * a * a * a;
    q.c[1] = k1 - 2.0 * k2 * a + 3.0 * k3 * a * a;
    q.c[2] = k2 - 3.0 * k3 * a;
    q.c[3] = k3;
    return q;
}

// Piecewise function with constant curvature per piece, C^1 across
// breakpoints.  Exact container for 1D minimizers and bang-bang profiles.
struct PiecewiseQuadratic1D {
    std::vector<double> breakpoints;  // t0 = a < ... < tk = b
    std::vector<double> curvature;    // sigma_j on [t_j, t_{j+1}]
    double value_at_a = 0.0;
    double slope_at_a = 0.0;

    double sup_curvature() const {
        double s = 0.0;
        for (double c : curvature) s = std::max(s, std::abs(c));
        return s;
    }

    // (value, slope) at x by exact piecewise integration.
    std::pair<double, double> state(double x) const {
        double v = value_at_a, s = slope_at_a;
        for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j) {
            double t0 = breakpoints[j], t1 = std::min(breakpoints[j + 1], x);
            if (t1 <= t0) break;
            double dt = t1 - t0;
            v += s * dt + 0.5 * curvature[j] * dt * dt;
            s += curvature[j] * dt;
            if (x <= breakpoints[j + 1]) break;
        }
        return {v, s};
    }
    double value(double x) const { return state(x).first; }
    double deriv(double x) const { return state(x).second; }
    double second(double x) const {
        for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j)
            if (x <= breakpoints[j + 1]) return curvature[j];
        return curvature.back();
    }

    DiscreteFunction sample(const Grid& g) const {
        return DiscreteFunction::from_function(
            g, [this](const Vec& p) { return value(p[0]); },
            [this](const Vec& p) { return Vec(deriv(p[0])); });
    }
};

// The absolute (and global) minimizer of ||u''||_inf under clamped data:
// the quadratic when the data allows one, otherwise the unique two-piece
// profile u'' = +-s with a single curvature jump.
inline PiecewiseQuadratic1D absolute_minimizer_pure(double a, double b, double A, double Ap,
                                                    double B, double Bp) {
    if (!(a < b)) throw contract_violation("absolute_minimizer_pure: requires a < b");
    double L = b - a;
    double V = B - A - Ap * L;      // value defect
    double W = Bp - Ap;             // slope defect
    double scale = std::abs(A) + std::abs(B) + L * (std::abs(Ap) + std::abs(Bp)) + 1.0;

    PiecewiseQuadratic1D u;
    u.value_at_a = A;
    u.slope_at_a = Ap;

    double compat = V - 0.5 * W * L;  // zero iff a quadratic interpolates
    if (std::abs(compat) <= 1e-13 * scale) {
        u.breakpoints = {a, b};
        u.curvature = {W / L};
        return u;
    }

    // Two pieces with curvature k then -k; t = alpha - beta where alpha,beta
    // are the piece lengths.  Endpoint conditions reduce to
    //   k t = W,   k (L t / 2 + (L^2 - t^2)/4) = V.
    double t, k;
    if (W == 0.0) {
        t = 0.0;
        k = 4.0 * V / (L * L);
    } else {
        double V2 = V - 0.5 * W * L;
        double disc = std::sqrt(4.0 * V2 * V2 + W * W * L * L);
        double t1 = (-2.0 * V2 + disc) / W;
        double t2 = (-2.0 * V2 - disc) / W;
        // the two roots have product -L^2, so exactly one lies in (-L, L)
        t = (std::abs(t1) < L) ? t1 : t2;
        k = W / t;
    }
    double c = a + 0.5 * (L + t);
    u.breakpoints = {a, c, b};
    u.curvature = {k, -k};
    return u;
}

// Bump profile zeta(t) = t^3 (1-t)^2 / 2: the unique cubic-through-quintic
// with zeta'(0)=zeta''(0)=0, zeta(1)=zeta'(1)=0, zeta''(1)=1.
inline double bump_zeta(double t) { return 0.5 * t * t * t * (1.0 - t) * (1.0 - t); }
inline double bump_zeta_d(double t) { return 0.5 * t * t * (1.0 - t) * (3.0 - 5.0 * t); }
inline double bump_zeta_dd(double t) { return t * (3.0 - 12.0 * t + 10.0 * t * t); }

// phi(y) = rho^2 zeta(|y - x0| / rho) inside the ball, zero outside; a C^2
// element of W^{2,inf}_0(B_rho(x0)) with unit radial curvature at the sphere.
inline DiscreteFunction radial_bump(const Vec& center, double rho, const Grid& grid) {
    for (int ax = 0; ax < grid.n; ++ax) {
        std::size_t k = static_cast<std::size_t>(ax);
        if (center[ax] - rho < grid.a[k] || center[ax] + rho > grid.b[k])
            throw contract_violation("radial_bump: ball not contained in the domain");
    }
    auto f = [&](const Vec& y) {
        Vec d = y;
        for (int ax = 0; ax < grid.n; ++ax) d[ax] -= center[ax];
        double r = d.norm();
        if (r >= rho) return 0.0;
        return rho * rho * bump_zeta(r / rho);
    };
    auto df = [&](const Vec& y) {
        Vec d = y;
        for (int ax = 0; ax < grid.n; ++ax) d[ax] -= center[ax];
        double r = d.norm();
        if (r >= rho || r == 0.0) return Vec::zero(grid.n);
        return d * (rho * bump_zeta_d(r / rho) / r);
    };
    return DiscreteFunction::from_function(grid, f, df);
}

struct MinimalityViolation {
    double a1 = 0.0, b1 = 0.0;
    std::uint64_t seed = 0;
    double margin = 0.0;
};

struct MinimalityReport {
    int trials = 0;
    std::vector<MinimalityViolation> violations;
    double worst_margin = -std::numeric_limits<double>::infinity();
};

namespace detail {

// Second-difference jets of a nodal vector restricted to [i1, i2]; stencils
// reach one node outside the window, which is fine strictly inside the grid.
inline Jet2 jet_1d(const Grid& g, const std::vector<double>& v, int i) {
    double h = g.h(0);
    std::size_t k = static_cast<std::size_t>(i);
    return Jet2(Vec(g.a[0] + i * h), v[k], Vec((v[k + 1] - v[k - 1]) / (2.0 * h)),
                SymMat((v[k - 1] - 2.0 * v[k] + v[k + 1]) / (h * h)));
}

inline double window_sup_energy(const Supremand& H, const Grid& g, const std::vector<double>& v,
                                int i1, int i2) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = i1; i <= i2; ++i) best = std::max(best, H.value(jet_1d(g, v, i)));
    return best;
}

// Random perturbation vanishing to first order at x = a1, b1: either a
// scaled radial bump or a quintic spline with a random quadratic factor.
inline std::vector<double> random_perturbation(const Grid& g, int i1, int i2, std::mt19937_64& rng,
                                               double amplitude_scale) {
    double h = g.h(0);
    double a1 = g.a[0] + i1 * h, b1 = g.a[0] + i2 * h;
    std::vector<double> phi(static_cast<std::size_t>(g.total_nodes()), 0.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double logamp = std::log(1e-3) + uni(rng) * (std::log(1.0) - std::log(1e-3));
    double amp = std::exp(logamp) * amplitude_scale * (uni(rng) < 0.5 ? -1.0 : 1.0);

    if (uni(rng) < 0.5) {
        double rho = (0.1 + 0.4 * uni(rng)) * (b1 - a1);
        double x0 = a1 + rho + uni(rng) * ((b1 - a1) - 2.0 * rho);
        for (int i = i1; i <= i2; ++i) {
            double x = g.a[0] + i * h;
            double r = std::abs(x - x0);
            if (r < rho) phi[static_cast<std::size_t>(i)] = amp * bump_zeta(r / rho);
        }
    } else {
        double c0 = 2.0 * uni(rng) - 1.0, c1 = 2.0 * uni(rng) - 1.0, c2 = 2.0 * uni(rng) - 1.0;
        double L = b1 - a1;
        for (int i = i1; i <= i2; ++i) {
            double s = (g.a[0] + i * h - a1) / L;
            double w = s * s * (1.0 - s) * (1.0 - s);
            phi[static_cast<std::size_t>(i)] = amp * w * (c0 + c1 * s + c2 * s * s);
        }
    }
    return phi;
}

}  // namespace detail

// Randomized absolute-minimality test: for random subintervals and perturbations
// vanishing to first order at their ends, check
//   E_inf(u, O') <= E_inf(u + phi, O') + tol.
// Violations are data, not errors.
inline MinimalityReport check_absolute_minimality(const Supremand& H, const DiscreteFunction& u,
                                                  int trials, std::uint64_t seed, double tol) {
    if (u.grid.n != 1) throw contract_violation("check_absolute_minimality: 1D only");
    const Grid& g = u.grid;
    int m = g.m[0];
    MinimalityReport rep;
    rep.trials = trials;

    double curb = 0.0;
    for (const auto& s : jet_field(u)) curb = std::max(curb, std::abs(s.jet.X.e[0]));
    double amp_scale = (curb + 1.0) * g.h(0) * g.h(0);  // bump curvature ~ amplitude / h^2 territory
    // Amplitudes are scaled so perturbation curvatures span [tiny, O(energy)].
    amp_scale = std::max(amp_scale, (curb + 1.0) * 0.05 * (g.b[0] - g.a[0]) * (g.b[0] - g.a[0]));

    for (int t = 0; t < trials; ++t) {
        std::uint64_t trial_seed = seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(t + 1);
        std::mt19937_64 rng(trial_seed);
        std::uniform_int_distribution<int> pick(1, m - 2);
        int i1 = pick(rng), i2 = pick(rng);
        if (i1 > i2) std::swap(i1, i2);
        if (i2 - i1 < 10) {
            i2 = std::min(m - 2, i1 + 10);
            i1 = std::max(1, i2 - 10);
        }
        std::vector<double> v = u.values;
        if (t % 3 == 0) {
            // strongest competitor: the window's own two-piece optimal profile
            double h = g.h(0);
            double a1 = g.a[0] + i1 * h, b1 = g.a[0] + i2 * h;
            std::size_t k1 = static_cast<std::size_t>(i1), k2 = static_cast<std::size_t>(i2);
            double Ap = (u.values[k1 + 1] - u.values[k1 - 1]) / (2.0 * h);
            double Bp = (u.values[k2 + 1] - u.values[k2 - 1]) / (2.0 * h);
            auto repl = absolute_minimizer_pure(a1, b1, u.values[k1], Ap, u.values[k2], Bp);
            for (int i = i1 + 1; i < i2; ++i)
                v[static_cast<std::size_t>(i)] = repl.value(g.a[0] + i * h);
        } else {
            auto phi = detail::random_perturbation(g, i1, i2, rng, amp_scale);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += phi[i];
        }
        double e_u = detail::window_sup_energy(H, g, u.values, i1, i2);
        double e_up = detail::window_sup_energy(H, g, v, i1, i2);
        double margin = e_u - e_up;
        rep.worst_margin = std::max(rep.worst_margin, margin);
        if (margin > tol)
            rep.violations.push_back({g.a[0] + i1 * g.h(0), g.a[0] + i2 * g.h(0), trial_seed, margin});
    }
    return rep;
}

// Danskin-type inequality data: on the argmax band of H(J^2 u) over [i1,i2],
// evaluate L(phi) = H_eta phi + H_p phi' + H_X : phi'' and return its
// extremes.  For an absolute minimizer the max is >= 0 up to discrete slack.
inline std::pair<double, double> danskin_check(const Supremand& H, const DiscreteFunction& u,
                                               int i1, int i2, const std::vector<double>& phi,
                                               double band_delta) {
    if (u.grid.n != 1) throw contract_violation("danskin_check: 1D only");
    const Grid& g = u.grid;
    if (i1 < 1 || i2 > g.m[0] - 2 || i1 > i2) throw contract_violation("danskin_check: bad window");

    std::vector<double> hvals(static_cast<std::size_t>(i2 - i1 + 1));
    double hmax = -std::numeric_limits<double>::infinity();
    for (int i = i1; i <= i2; ++i) {
        hvals[static_cast<std::size_t>(i - i1)] = H.value(detail::jet_1d(g, u.values, i));
        hmax = std::max(hmax, hvals[static_cast<std::size_t>(i - i1)]);
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double h = g.h(0);
    for (int i = i1; i <= i2; ++i) {
        if (hvals[static_cast<std::size_t>(i - i1)] < hmax - band_delta) continue;
        SupremandGradient grad = H.partials(detail::jet_1d(g, u.values, i));
        std::size_t k = static_cast<std::size_t>(i);
        double dphi = (phi[k + 1] - phi[k - 1]) / (2.0 * h);
        double ddphi = (phi[k - 1] - 2.0 * phi[k] + phi[k + 1]) / (h * h);
        double L = grad.d_eta * phi[k] + grad.d_p[0] * dphi + grad.d_X.e[0] * ddphi;
        lo = std::min(lo, L);
        hi = std::max(hi, L);
    }
    if (!(hi >= lo)) throw std::logic_error("danskin_check: empty argmax band");
    return {hi, lo};
}

}  // namespace supinf
