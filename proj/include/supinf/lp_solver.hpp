#pragma once

#include <cmath>
#include <deque>
#include <random>
#include <vector>

#include "grid.hpp"
#include "oracle1d.hpp"

namespace supinf {

struct SolverOptions {
    double M = 1.0;          // shift; must exceed the supremand's lower bound
    double eps = 1e-3;       // smoothing for non-differentiable supremands
    int max_iterations = 20000;
    double gtol = 1e-8;      // sup-norm gradient tolerance
    double ls_c1 = 1e-4;     // Armijo constant
    double ls_shrink = 0.5;
    int ls_max = 60;
    int restarts = 0;        // extra perturbed starts for non-level-convex H
    std::uint64_t seed = 0;
};

struct SolveReport {
    double p = 0.0;
    double final_ep = 0.0;
    double final_einf = 0.0;
    int iterations = 0;
    double grad_norm = 0.0;
    bool converged = false;
    int shift_doublings = 0;
    double shift_used = 0.0;
};

struct ContinuationStep {
    double p = 0.0;
    DiscreteFunction u;
    SolveReport report;
    double diagonal = 0.0;  // E_p(u_p) with the unsmoothed supremand
};

struct ContinuationResult {
    std::vector<ContinuationStep> steps;
    double einf_boundary_extension = 0.0;  // E_inf of the data extension; competitor upper bound
    const DiscreteFunction& limit() const { return steps.back().u; }
};

// Cubic Hermite extension of the clamped data (1D) or Coons trace blend (2D):
// the competitor g used for initial guesses and the E_p <= 1 + E_inf(g) bound.
inline DiscreteFunction boundary_extension(const Grid& grid, const BoundaryData& bd) {
    if (grid.n == 1) {
        double A = bd.trace_xmin.at(0), B = bd.trace_xmax.at(0);
        double Ap = -bd.slope_xmin.at(0), Bp = bd.slope_xmax.at(0);
        return cubic_hermite(grid.a[0], grid.b[0], A, Ap, B, Bp).sample(grid);
    }
    int mx = grid.m[0], my = grid.m[1];
    std::vector<double> vals(static_cast<std::size_t>(grid.total_nodes()));
    for (int iy = 0; iy < my; ++iy) {
        double t = static_cast<double>(iy) / (my - 1);
        for (int ix = 0; ix < mx; ++ix) {
            double s = static_cast<double>(ix) / (mx - 1);
            std::size_t sx = static_cast<std::size_t>(ix), sy = static_cast<std::size_t>(iy);
            double blend = (1.0 - s) * bd.trace_xmin.at(sy) + s * bd.trace_xmax.at(sy) +
                           (1.0 - t) * bd.trace_ymin.at(sx) + t * bd.trace_ymax.at(sx) -
                           ((1.0 - s) * (1.0 - t) * bd.trace_ymin.at(0) + s * (1.0 - t) * bd.trace_ymin.at(static_cast<std::size_t>(mx - 1)) +
                            (1.0 - s) * t * bd.trace_ymax.at(0) + s * t * bd.trace_ymax.at(static_cast<std::size_t>(mx - 1)));
            vals[static_cast<std::size_t>(grid.index(ix, iy))] = blend;
        }
    }
    return DiscreteFunction(grid, std::move(vals), bd);
}

// Smoothing surrogate used inside optimization only; reported energies always
// use the original supremand.
inline SupremandPtr optimization_surrogate(const SupremandPtr& H, double eps) {
    if (eps > 0.0 && dynamic_cast<const PureHessianNorm*>(H.get()))
        return std::make_shared<SmoothedHessianNorm>(H->dimension(), eps);
    return H;
}

// Discrete E_p objective over the free (non-boundary) nodal values, with an
// analytic gradient assembled through the stencil adjoints.
class LpObjective {
  public:
    LpObjective(SupremandPtr H, Grid grid, BoundaryData bd, double p, double M)
        : H_(std::move(H)), grid_(grid), bd_(std::move(bd)), p_(p), M_(M) {
        for (int idx = 0; idx < grid_.total_nodes(); ++idx)
            if (!grid_.on_boundary(idx)) free_.push_back(idx);
    }

    const std::vector<int>& free_nodes() const { return free_; }
    double shift() const { return M_; }
    void set_shift(double M) { M_ = M; }

    DiscreteFunction assemble(const std::vector<double>& x) const {
        std::vector<double> vals(static_cast<std::size_t>(grid_.total_nodes()), 0.0);
        for (std::size_t k = 0; k < free_.size(); ++k)
            vals[static_cast<std::size_t>(free_[k])] = x[k];
        return DiscreteFunction(grid_, std::move(vals), bd_);
    }

    std::vector<double> extract(const DiscreteFunction& u) const {
        std::vector<double> x(free_.size());
        for (std::size_t k = 0; k < free_.size(); ++k)
            x[k] = u.values[static_cast<std::size_t>(free_[k])];
        return x;
    }

    double value(const std::vector<double>& x) const {
        DiscreteFunction u = assemble(x);
        return lp_energy(*H_, u, p_, M_);
    }

    double value_and_gradient(const std::vector<double>& x, std::vector<double>& grad) const {
        DiscreteFunction u = assemble(x);
        auto jets = jet_field(u);

        double amax = -std::numeric_limits<double>::infinity();
        std::vector<double> F(jets.size());
        for (std::size_t i = 0; i < jets.size(); ++i) {
            F[i] = H_->value(jets[i].jet);
            if (!(M_ + F[i] > 0.0))
                throw contract_violation("shift violation: M + H <= 0 at node " +
                                         std::to_string(jets[i].node));
            amax = std::max(amax, std::log(M_ + F[i]));
        }
        double S = 0.0, W = 0.0;
        std::vector<double> r(jets.size());
        for (std::size_t i = 0; i < jets.size(); ++i) {
            r[i] = std::exp(p_ * (std::log(M_ + F[i]) - amax));
            S += jets[i].weight * r[i];
            W += jets[i].weight;
        }
        double energy = std::exp(amax + std::log(S / W) / p_) - M_;

        // d energy / d F_i
        std::vector<double> coef(jets.size());
        for (std::size_t i = 0; i < jets.size(); ++i)
            coef[i] = (energy + M_) * jets[i].weight * r[i] / (S * (M_ + F[i]));

        // Accumulate into the extended (ghosted) array, then fold the ghost
        // sensitivities back onto their source nodes.
        int mx = grid_.m[0], my = (grid_.n == 2) ? grid_.m[1] : 1;
        int ex = mx + 2, ey = (grid_.n == 2) ? my + 2 : 1;
        std::vector<double> ge(static_cast<std::size_t>(ex) * static_cast<std::size_t>(ey), 0.0);
        int yoff = (grid_.n == 2) ? 1 : 0;
        auto G = [&](int ix, int iy) -> double& {
            return ge[static_cast<std::size_t>((iy + yoff) * ex + ix + 1)];
        };
        double hx = grid_.h(0), hy = (grid_.n == 2) ? grid_.h(1) : 1.0;

        for (std::size_t i = 0; i < jets.size(); ++i) {
            auto [ix, iy] = grid_.coords(jets[i].node);
            SupremandGradient gj = H_->partials(jets[i].jet);
            double c = coef[i];
            G(ix, iy) += c * gj.d_eta;
            G(ix + 1, iy) += c * gj.d_p[0] / (2.0 * hx);
            G(ix - 1, iy) -= c * gj.d_p[0] / (2.0 * hx);
            double cxx = c * gj.d_X(0, 0) / (hx * hx);
            G(ix - 1, iy) += cxx;
            G(ix, iy) -= 2.0 * cxx;
            G(ix + 1, iy) += cxx;
            if (grid_.n == 2) {
                G(ix, iy + 1) += c * gj.d_p[1] / (2.0 * hy);
                G(ix, iy - 1) -= c * gj.d_p[1] / (2.0 * hy);
                double cyy = c * gj.d_X(1, 1) / (hy * hy);
                G(ix, iy - 1) += cyy;
                G(ix, iy) -= 2.0 * cyy;
                G(ix, iy + 1) += cyy;
                double cxy = c * 2.0 * gj.d_X(0, 1) / (4.0 * hx * hy);
                G(ix + 1, iy + 1) += cxy;
                G(ix - 1, iy - 1) += cxy;
                G(ix + 1, iy - 1) -= cxy;
                G(ix - 1, iy + 1) -= cxy;
            }
        }

        // Ghost folding mirrors ExtendedField's construction in reverse:
        // y-ghost rows were built from in-row values (including x-ghosts),
        // x-ghost columns from column 1 / mx-2.
        if (grid_.n == 2) {
            for (int ix = -1; ix <= mx; ++ix) {
                G(ix, 1) += G(ix, -1);
                G(ix, -1) = 0.0;
                G(ix, my - 2) += G(ix, my);
                G(ix, my) = 0.0;
            }
        }
        for (int iy = 0; iy < my; ++iy) {
            G(1, iy) += G(-1, iy);
            G(-1, iy) = 0.0;
            G(mx - 2, iy) += G(mx, iy);
            G(mx, iy) = 0.0;
        }

        grad.assign(free_.size(), 0.0);
        for (std::size_t k = 0; k < free_.size(); ++k) {
            auto [ix, iy] = grid_.coords(free_[k]);
            grad[k] = G(ix, iy);
        }
        return energy;
    }

  private:
    SupremandPtr H_;
    Grid grid_;
    BoundaryData bd_;
    double p_;
    double M_;
    std::vector<int> free_;
};

namespace detail {

inline double inf_norm(const std::vector<double>& v) {
    double r = 0.0;
    for (double x : v) r = std::max(r, std::abs(x));
    return r;
}

// Limited-memory BFGS with Armijo backtracking; minimizes obj over x.
inline SolveReport lbfgs_minimize(const LpObjective& obj, std::vector<double>& x,
                                  const SolverOptions& opts) {
    const std::size_t mem = 10;
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;

    std::vector<double> g, g_new, d, x_new;
    double f = obj.value_and_gradient(x, g);
    SolveReport rep;

    for (int it = 0; it < opts.max_iterations; ++it) {
        rep.iterations = it;
        rep.grad_norm = inf_norm(g);
        if (rep.grad_norm <= opts.gtol) {
            rep.converged = true;
            break;
        }

        // two-loop recursion
        d = g;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            double a = 0.0;
            for (std::size_t k = 0; k < d.size(); ++k) a += s_hist[i][k] * d[k];
            a *= rho_hist[i];
            alpha[i] = a;
            for (std::size_t k = 0; k < d.size(); ++k) d[k] -= a * y_hist[i][k];
        }
        if (!s_hist.empty()) {
            double sy = 0.0, yy = 0.0;
            for (std::size_t k = 0; k < d.size(); ++k) {
                sy += s_hist.back()[k] * y_hist.back()[k];
                yy += y_hist.back()[k] * y_hist.back()[k];
            }
            double gamma = sy / yy;
            for (double& v : d) v *= gamma;
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            double b = 0.0;
            for (std::size_t k = 0; k < d.size(); ++k) b += y_hist[i][k] * d[k];
            b *= rho_hist[i];
            for (std::size_t k = 0; k < d.size(); ++k) d[k] += (alpha[i] - b) * s_hist[i][k];
        }
        for (double& v : d) v = -v;

        double gd = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k) gd += g[k] * d[k];
        if (gd >= 0.0) {  // not a descent direction; fall back to steepest descent
            for (std::size_t k = 0; k < d.size(); ++k) d[k] = -g[k];
            gd = 0.0;
            for (double v : g) gd -= v * v;
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        double step = (it == 0 && s_hist.empty()) ? 1.0 / (1.0 + inf_norm(g)) : 1.0;
        double f_new = f;
        bool accepted = false;
        for (int ls = 0; ls < opts.ls_max; ++ls) {
            x_new = x;
            for (std::size_t k = 0; k < x.size(); ++k) x_new[k] += step * d[k];
            f_new = obj.value(x_new);
            if (f_new <= f + opts.ls_c1 * step * gd) {
                accepted = true;
                break;
            }
            step *= opts.ls_shrink;
        }
        if (!accepted) break;  // stalled; report with current gradient norm

        double f_prev = f;
        f = obj.value_and_gradient(x_new, g_new);

        std::vector<double> sk(x.size()), yk(x.size());
        double sy = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            sk[k] = x_new[k] - x[k];
            yk[k] = g_new[k] - g[k];
            sy += sk[k] * yk[k];
        }
        if (sy > 1e-14 * inf_norm(yk) * inf_norm(sk) + 1e-300) {
            s_hist.push_back(std::move(sk));
            y_hist.push_back(std::move(yk));
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > mem) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        x = x_new;
        g = g_new;
        if (std::abs(f_prev - f) <= 1e-16 * (1.0 + std::abs(f)) && inf_norm(g) <= 1e3 * opts.gtol) {
            // flat to roundoff near the optimum
        }
    }
    rep.grad_norm = inf_norm(g);
    if (rep.grad_norm <= opts.gtol) rep.converged = true;
    rep.final_ep = f;
    return rep;
}

}  // namespace detail

// Minimizes the discrete E_p over interior nodal values with fixed clamped
// boundary data.  The initial guess is the boundary extension unless a warm
// start is supplied.  Shift violations trigger doubling of M, at most 10
// times.
inline std::pair<DiscreteFunction, SolveReport> minimize_ep(
    const SupremandPtr& H, const Grid& grid, const BoundaryData& bd, double p,
    const SolverOptions& opts, const DiscreteFunction* warm_start = nullptr) {
    if (!(p > 1.0)) throw contract_violation("minimize_ep: requires p > 1");
    if (!(opts.M > H->lower_bound()))
        throw contract_violation("minimize_ep: shift M must exceed the supremand lower bound");
    if (!(opts.gtol > 0.0)) throw contract_violation("minimize_ep: gtol must be positive");

    SupremandPtr Hopt = optimization_surrogate(H, opts.eps);
    double M = opts.M;
    DiscreteFunction init = warm_start ? *warm_start : boundary_extension(grid, bd);

    for (int doubling = 0; doubling <= 10; ++doubling) {
        LpObjective obj(Hopt, grid, bd, p, M);
        std::vector<double> x = obj.extract(init);
        try {
            SolverOptions run = opts;
            SolveReport rep = detail::lbfgs_minimize(obj, x, run);
            DiscreteFunction u = obj.assemble(x);

            if (opts.restarts > 0) {
                std::mt19937_64 rng(opts.seed);
                std::normal_distribution<double> noise(0.0, 1.0);
                double scale = 0.1 * (1.0 + detail::inf_norm(x));
                for (int rstart = 0; rstart < opts.restarts; ++rstart) {
                    std::vector<double> xr = obj.extract(init);
                    for (double& v : xr) v += scale * noise(rng);
                    SolveReport rr = detail::lbfgs_minimize(obj, xr, opts);
                    if (rr.final_ep < rep.final_ep) {
                        rep = rr;
                        u = obj.assemble(xr);
                    }
                }
            }

            rep.p = p;
            rep.shift_doublings = doubling;
            rep.shift_used = M;
            rep.final_ep = lp_energy(*Hopt, u, p, M);
            rep.final_einf = sup_energy(*H, u);
            return {std::move(u), rep};
        } catch (const contract_violation& e) {
            if (std::string(e.what()).find("shift violation") == std::string::npos) throw;
            M *= 2.0;
        }
    }
    throw std::runtime_error("minimize_ep: shift violations persisted after 10 doublings of M");
}

// p-continuation with warm starts along an increasing schedule.
inline ContinuationResult continuation(const SupremandPtr& H, const Grid& grid,
                                       const BoundaryData& bd, const std::vector<double>& schedule,
                                       const SolverOptions& opts) {
    if (schedule.empty()) throw contract_violation("continuation: empty schedule");
    if (schedule.front() < 2.0) throw contract_violation("continuation: first p must be >= 2");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] > schedule[i - 1]))
            throw contract_violation("continuation: schedule must be increasing");

    ContinuationResult result;
    result.einf_boundary_extension = sup_energy(*H, boundary_extension(grid, bd));
    const DiscreteFunction* warm = nullptr;
    for (double p : schedule) {
        auto [u, rep] = minimize_ep(H, grid, bd, p, opts, warm);
        double diag = lp_energy(*H, u, p, opts.M);
        result.steps.push_back({p, std::move(u), rep, diag});
        warm = &result.steps.back().u;
    }
    return result;
}

// Discrete divergence-form Euler-Lagrange residual
//   D^2_ij(w H_Xij) - D_k(w H_pk) + w H_eta,   w = ((M+H)/(M+H)_max)^{p-1},
// with the weight normalized by its max so large p stays representable.
// Evaluated at doubly-interior nodes; returns the per-node field (zero on the
// excluded ring) and its max norm.
inline std::pair<std::vector<double>, double> el_residual(const SupremandPtr& H,
                                                          const DiscreteFunction& u, double p,
                                                          double M) {
    if (!(p >= 2.0)) throw contract_violation("el_residual: requires p >= 2");
    const Grid& g = u.grid;
    auto jets = jet_field(u);

    double amax = -std::numeric_limits<double>::infinity();
    std::vector<double> logb(jets.size());
    for (std::size_t i = 0; i < jets.size(); ++i) {
        double base = M + H->value(jets[i].jet);
        if (!(base > 0.0)) throw contract_violation("el_residual: shift violation");
        logb[i] = std::log(base);
        amax = std::max(amax, logb[i]);
    }
    std::size_t N = jets.size();
    std::vector<double> wHe(N), wHx(N), wHy(N), wXxx(N), wXxy(N), wXyy(N);
    for (std::size_t i = 0; i < N; ++i) {
        double w = std::exp((p - 1.0) * (logb[i] - amax));
        SupremandGradient gi = H->partials(jets[i].jet);
        wHe[i] = w * gi.d_eta;
        wHx[i] = w * gi.d_p[0];
        wXxx[i] = w * gi.d_X(0, 0);
        if (g.n == 2) {
            wHy[i] = w * gi.d_p[1];
            wXxy[i] = w * gi.d_X(0, 1);
            wXyy[i] = w * gi.d_X(1, 1);
        }
    }

    std::vector<double> res(N, 0.0);
    double norm = 0.0;
    double hx = g.h(0), hy = (g.n == 2) ? g.h(1) : 1.0;
    auto at = [&](const std::vector<double>& f, int ix, int iy) {
        return f[static_cast<std::size_t>(g.index(ix, iy))];
    };
    int mx = g.m[0], my = (g.n == 2) ? g.m[1] : 1;
    for (std::size_t i = 0; i < N; ++i) {
        auto [ix, iy] = g.coords(jets[i].node);
        bool inner = ix >= 2 && ix <= mx - 3 && (g.n == 1 || (iy >= 2 && iy <= my - 3));
        if (!inner) continue;
        double r = (at(wXxx, ix - 1, iy) - 2.0 * at(wXxx, ix, iy) + at(wXxx, ix + 1, iy)) / (hx * hx) -
                   (at(wHx, ix + 1, iy) - at(wHx, ix - 1, iy)) / (2.0 * hx) + wHe[i];
        if (g.n == 2) {
            r += (at(wXyy, ix, iy - 1) - 2.0 * at(wXyy, ix, iy) + at(wXyy, ix, iy + 1)) / (hy * hy);
            r += 2.0 * (at(wXxy, ix + 1, iy + 1) - at(wXxy, ix - 1, iy + 1) - at(wXxy, ix + 1, iy - 1) +
                        at(wXxy, ix - 1, iy - 1)) / (4.0 * hx * hy);
            r -= (at(wHy, ix, iy + 1) - at(wHy, ix, iy - 1)) / (2.0 * hy);
        }
        res[i] = r;
        norm = std::max(norm, std::abs(r));
    }
    return {std::move(res), norm};
}

}  // namespace supinf
