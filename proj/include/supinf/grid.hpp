#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "supremand.hpp"

namespace supinf {

// Uniform tensor-product grid on an interval (n=1) or rectangle (n=2).
struct Grid {
    int n = 1;
    std::array<double, 2> a{0.0, 0.0};
    std::array<double, 2> b{1.0, 0.0};
    std::array<int, 2> m{0, 1};  // nodes per axis; m[1] = 1 in 1D

    static Grid interval(double a0, double b0, int m0) {
        if (!(a0 < b0)) throw contract_violation("grid: requires a < b");
        if (m0 < 5) throw contract_violation("grid: requires >= 5 nodes per axis");
        Grid g;
        g.n = 1;
        g.a = {a0, 0.0};
        g.b = {b0, 0.0};
        g.m = {m0, 1};
        return g;
    }

    static Grid rectangle(double ax, double bx, int mx, double ay, double by, int my) {
        if (!(ax < bx) || !(ay < by)) throw contract_violation("grid: requires a < b per axis");
        if (mx < 5 || my < 5) throw contract_violation("grid: requires >= 5 nodes per axis");
        Grid g;
        g.n = 2;
        g.a = {ax, ay};
        g.b = {bx, by};
        g.m = {mx, my};
        return g;
    }

    double h(int axis) const {
        return (b[static_cast<std::size_t>(axis)] - a[static_cast<std::size_t>(axis)]) /
               (m[static_cast<std::size_t>(axis)] - 1);
    }
    int total_nodes() const { return m[0] * m[1]; }

    // Row-major node index: iy * mx + ix.
    int index(int ix, int iy = 0) const { return iy * m[0] + ix; }
    std::pair<int, int> coords(int idx) const { return {idx % m[0], idx / m[0]}; }

    Vec position(int idx) const {
        auto [ix, iy] = coords(idx);
        if (n == 1) return Vec(a[0] + ix * h(0));
        return Vec(a[0] + ix * h(0), a[1] + iy * h(1));
    }

    bool on_boundary(int idx) const {
        auto [ix, iy] = coords(idx);
        if (ix == 0 || ix == m[0] - 1) return true;
        if (n == 2 && (iy == 0 || iy == m[1] - 1)) return true;
        return false;
    }
};

// Clamped first-order Dirichlet data: trace g and outward normal derivative
// Dg.nu on every boundary node, stored per face.  Faces: xmin, xmax (1D),
// plus ymin, ymax (2D); each array runs along the face.
struct BoundaryData {
    std::vector<double> trace_xmin, trace_xmax, trace_ymin, trace_ymax;
    std::vector<double> slope_xmin, slope_xmax, slope_ymin, slope_ymax;

    // 1D convenience: A = g(a), Ap = g'(a), B = g(b), Bp = g'(b).
    static BoundaryData clamped1d(double A, double Ap, double B, double Bp) {
        BoundaryData bd;
        bd.trace_xmin = {A};
        bd.trace_xmax = {B};
        bd.slope_xmin = {-Ap};  // outward normal at xmin is -e1
        bd.slope_xmax = {Bp};
        return bd;
    }

    static BoundaryData zero(const Grid& g) {
        BoundaryData bd;
        if (g.n == 1) return clamped1d(0.0, 0.0, 0.0, 0.0);
        bd.trace_xmin.assign(static_cast<std::size_t>(g.m[1]), 0.0);
        bd.trace_xmax.assign(static_cast<std::size_t>(g.m[1]), 0.0);
        bd.trace_ymin.assign(static_cast<std::size_t>(g.m[0]), 0.0);
        bd.trace_ymax.assign(static_cast<std::size_t>(g.m[0]), 0.0);
        bd.slope_xmin = bd.trace_xmin;
        bd.slope_xmax = bd.trace_xmax;
        bd.slope_ymin = bd.trace_ymin;
        bd.slope_ymax = bd.trace_ymax;
        return bd;
    }

    // Build from smooth g with gradient dg (used by fixtures).
    static BoundaryData from_function(const Grid& g,
                                      const std::function<double(const Vec&)>& f,
                                      const std::function<Vec(const Vec&)>& df) {
        if (g.n == 1) {
            Vec pa(g.a[0]), pb(g.b[0]);
            return clamped1d(f(pa), df(pa)[0], f(pb), df(pb)[0]);
        }
        BoundaryData bd = zero(g);
        for (int iy = 0; iy < g.m[1]; ++iy) {
            Vec p0 = g.position(g.index(0, iy)), p1 = g.position(g.index(g.m[0] - 1, iy));
            bd.trace_xmin[static_cast<std::size_t>(iy)] = f(p0);
            bd.trace_xmax[static_cast<std::size_t>(iy)] = f(p1);
            bd.slope_xmin[static_cast<std::size_t>(iy)] = -df(p0)[0];
            bd.slope_xmax[static_cast<std::size_t>(iy)] = df(p1)[0];
        }
        for (int ix = 0; ix < g.m[0]; ++ix) {
            Vec p0 = g.position(g.index(ix, 0)), p1 = g.position(g.index(ix, g.m[1] - 1));
            bd.trace_ymin[static_cast<std::size_t>(ix)] = f(p0);
            bd.trace_ymax[static_cast<std::size_t>(ix)] = f(p1);
            bd.slope_ymin[static_cast<std::size_t>(ix)] = -df(p0)[1];
            bd.slope_ymax[static_cast<std::size_t>(ix)] = df(p1)[1];
        }
        return bd;
    }
};

// Nodal values on a grid, with boundary traces written through at
// construction.  Immutable by convention once built.
struct DiscreteFunction {
    Grid grid;
    std::vector<double> values;
    BoundaryData boundary;

    DiscreteFunction() = default;
    DiscreteFunction(Grid g, std::vector<double> vals, BoundaryData bd)
        : grid(g), values(std::move(vals)), boundary(std::move(bd)) {
        if (static_cast<int>(values.size()) != grid.total_nodes())
            throw contract_violation("discrete function: value count != node count");
        apply_boundary();
    }

    static DiscreteFunction from_function(const Grid& g,
                                          const std::function<double(const Vec&)>& f,
                                          const std::function<Vec(const Vec&)>& df) {
        std::vector<double> vals(static_cast<std::size_t>(g.total_nodes()));
        for (int i = 0; i < g.total_nodes(); ++i) vals[static_cast<std::size_t>(i)] = f(g.position(i));
        return DiscreteFunction(g, std::move(vals), BoundaryData::from_function(g, f, df));
    }

    static DiscreteFunction constant(const Grid& g, double c) {
        return from_function(
            g, [c](const Vec&) { return c; }, [&](const Vec&) { return Vec::zero(g.n); });
    }

    double at(int ix, int iy = 0) const { return values[static_cast<std::size_t>(grid.index(ix, iy))]; }

    void apply_boundary() {
        const Grid& g = grid;
        if (g.n == 1) {
            values.front() = boundary.trace_xmin.at(0);
            values.back() = boundary.trace_xmax.at(0);
            return;
        }
        for (int iy = 0; iy < g.m[1]; ++iy) {
            values[static_cast<std::size_t>(g.index(0, iy))] = boundary.trace_xmin.at(static_cast<std::size_t>(iy));
            values[static_cast<std::size_t>(g.index(g.m[0] - 1, iy))] =
                boundary.trace_xmax.at(static_cast<std::size_t>(iy));
        }
        for (int ix = 0; ix < g.m[0]; ++ix) {
            values[static_cast<std::size_t>(g.index(ix, 0))] = boundary.trace_ymin.at(static_cast<std::size_t>(ix));
            values[static_cast<std::size_t>(g.index(ix, g.m[1] - 1))] =
                boundary.trace_ymax.at(static_cast<std::size_t>(ix));
        }
    }
};

// Nodal values extended by one ghost layer on each side.  The ghosts encode
// the clamped normal slope by second-order reflection,
//   ghost = u(inner neighbour) + 2h (Dg.nu),
// so central first differences at a boundary node reproduce the prescribed
// slope and central second differences are exact on quadratics.
class ExtendedField {
  public:
    explicit ExtendedField(const DiscreteFunction& u) : g_(u.grid) {
        int ex = g_.m[0] + 2, ey = (g_.n == 2) ? g_.m[1] + 2 : 1;
        ex_ = ex;
        data_.assign(static_cast<std::size_t>(ex) * static_cast<std::size_t>(ey), 0.0);
        if (g_.n == 1) {
            for (int i = 0; i < g_.m[0]; ++i) set(i, 0, u.values[static_cast<std::size_t>(i)]);
            double h = g_.h(0);
            set(-1, 0, u.values[1] + 2.0 * h * u.boundary.slope_xmin.at(0));
            set(g_.m[0], 0, u.values[static_cast<std::size_t>(g_.m[0] - 2)] + 2.0 * h * u.boundary.slope_xmax.at(0));
            return;
        }
        int mx = g_.m[0], my = g_.m[1];
        double hx = g_.h(0), hy = g_.h(1);
        for (int j = 0; j < my; ++j)
            for (int i = 0; i < mx; ++i) set(i, j, u.at(i, j));
        for (int j = 0; j < my; ++j) {
            set(-1, j, u.at(1, j) + 2.0 * hx * u.boundary.slope_xmin.at(static_cast<std::size_t>(j)));
            set(mx, j, u.at(mx - 2, j) + 2.0 * hx * u.boundary.slope_xmax.at(static_cast<std::size_t>(j)));
        }
        // y-ghosts across the real columns, then at the x-ghost columns with
        // the face slope extrapolated linearly (exact for quadratics).
        auto ymin_slope = [&](int i) -> double {
            const auto& s = u.boundary.slope_ymin;
            if (i == -1) return 2.0 * s.at(0) - s.at(1);
            if (i == mx) return 2.0 * s.at(static_cast<std::size_t>(mx - 1)) - s.at(static_cast<std::size_t>(mx - 2));
            return s.at(static_cast<std::size_t>(i));
        };
        auto ymax_slope = [&](int i) -> double {
            const auto& s = u.boundary.slope_ymax;
            if (i == -1) return 2.0 * s.at(0) - s.at(1);
            if (i == mx) return 2.0 * s.at(static_cast<std::size_t>(mx - 1)) - s.at(static_cast<std::size_t>(mx - 2));
            return s.at(static_cast<std::size_t>(i));
        };
        for (int i = -1; i <= mx; ++i) {
            set(i, -1, get(i, 1) + 2.0 * hy * ymin_slope(i));
            set(i, my, get(i, my - 2) + 2.0 * hy * ymax_slope(i));
        }
    }

    double get(int ix, int iy) const {
        return data_[static_cast<std::size_t>((iy + (g_.n == 2 ? 1 : 0)) * ex_ + ix + 1)];
    }

    Jet2 jet_at(int ix, int iy) const {
        double hx = g_.h(0);
        if (g_.n == 1) {
            double um = get(ix - 1, 0), u0 = get(ix, 0), up = get(ix + 1, 0);
            return Jet2(Vec(g_.a[0] + ix * hx), u0, Vec((up - um) / (2.0 * hx)),
                        SymMat((um - 2.0 * u0 + up) / (hx * hx)));
        }
        double hy = g_.h(1);
        double u0 = get(ix, iy);
        double uxm = get(ix - 1, iy), uxp = get(ix + 1, iy);
        double uym = get(ix, iy - 1), uyp = get(ix, iy + 1);
        double px = (uxp - uxm) / (2.0 * hx), py = (uyp - uym) / (2.0 * hy);
        double xx = (uxm - 2.0 * u0 + uxp) / (hx * hx);
        double yy = (uym - 2.0 * u0 + uyp) / (hy * hy);
        double xy = (get(ix + 1, iy + 1) - get(ix - 1, iy + 1) - get(ix + 1, iy - 1) + get(ix - 1, iy - 1)) /
                    (4.0 * hx * hy);
        return Jet2(Vec(g_.a[0] + ix * hx, g_.a[1] + iy * hy), u0, Vec(px, py), SymMat(xx, xy, yy));
    }

  private:
    void set(int ix, int iy, double v) {
        data_[static_cast<std::size_t>((iy + (g_.n == 2 ? 1 : 0)) * ex_ + ix + 1)] = v;
    }
    Grid g_;
    int ex_;
    std::vector<double> data_;
};

struct JetSample {
    int node = 0;
    Jet2 jet;
    double weight = 1.0;  // trapezoidal node weight
};

// Second-order jets at every node (boundary nodes via the ghost layer).
inline std::vector<JetSample> jet_field(const DiscreteFunction& u) {
    ExtendedField ext(u);
    const Grid& g = u.grid;
    std::vector<JetSample> out;
    out.reserve(static_cast<std::size_t>(g.total_nodes()));
    for (int idx = 0; idx < g.total_nodes(); ++idx) {
        auto [ix, iy] = g.coords(idx);
        double w = 1.0;
        if (ix == 0 || ix == g.m[0] - 1) w *= 0.5;
        if (g.n == 2 && (iy == 0 || iy == g.m[1] - 1)) w *= 0.5;
        out.push_back({idx, ext.jet_at(ix, iy), w});
    }
    return out;
}

// Discrete E_inf(u): max of H over the jet field.
inline double sup_energy(const Supremand& H, const DiscreteFunction& u) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : jet_field(u)) best = std::max(best, H.value(s.jet));
    return best;
}

// Shifted p-mean of a raw field with weights:
//   ( sum w_i (M + f_i)^p / sum w_i )^{1/p} - M,
// evaluated in log space so p ~ 1000 stays finite.
inline double shifted_power_mean(const std::vector<double>& f, const std::vector<double>& w,
                                 double p, double M) {
    if (f.empty()) throw contract_violation("shifted_power_mean: empty field");
    double amax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) {
        double base = M + f[i];
        if (!(base > 0.0))
            throw contract_violation("shift violation: M + H <= 0 at node " + std::to_string(i));
        amax = std::max(amax, std::log(base));
    }
    double S = 0.0, W = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double wi = w.empty() ? 1.0 : w[i];
        S += wi * std::exp(p * (std::log(M + f[i]) - amax));
        W += wi;
    }
    return std::exp(amax + std::log(S / W) / p) - M;
}

// Discrete E_p(u): shifted p-mean of H over the jet field, with
// trapezoidal weights playing the role of the dashed integral.
inline double lp_energy(const Supremand& H, const DiscreteFunction& u, double p, double M) {
    auto jets = jet_field(u);
    std::vector<double> f(jets.size()), w(jets.size());
    for (std::size_t i = 0; i < jets.size(); ++i) {
        f[i] = H.value(jets[i].jet);
        w[i] = jets[i].weight;
    }
    return shifted_power_mean(f, w, p, M);
}

// Strict-interior nodes minus an exclusion set; empty result is legal and
// left to the caller to flag.
inline std::set<int> interior_mask(const DiscreteFunction& u, const std::set<int>& exclusion = {}) {
    std::set<int> out;
    for (int idx = 0; idx < u.grid.total_nodes(); ++idx)
        if (!u.grid.on_boundary(idx) && !exclusion.count(idx)) out.insert(idx);
    return out;
}

}  // namespace supinf
