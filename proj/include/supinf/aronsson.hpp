#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "grid.hpp"
#include "io.hpp"
#include "supremand.hpp"

namespace supinf {

// Nodal values of the composed scalar field x -> H(J^2 u(x)).
inline std::vector<double> hessian_energy_field(const Supremand& H, const DiscreteFunction& u) {
    auto jets = jet_field(u);
    std::vector<double> f(jets.size());
    for (std::size_t i = 0; i < jets.size(); ++i) f[i] = H.value(jets[i].jet);
    return f;
}

// Per-node second-order operator residuals.  `valid` marks nodes where both
// stencils fit; `masked` additionally removes neighborhoods of detected
// curvature jumps, where the pointwise operator is not meaningful.
struct ResidualField {
    Grid grid;
    std::vector<double> contracted;  // H_X : DH (x) DH, DH by central differences of the field
    std::vector<double> expanded;    // H_X : L (x) L with L assembled from jet partials
    std::vector<double> grad_h;      // |DH| at the node
    std::vector<char> valid;
    std::vector<char> masked;  // valid and away from curvature jumps

    double max_abs_contracted() const {
        double r = 0.0;
        for (std::size_t i = 0; i < contracted.size(); ++i)
            if (masked[i]) r = std::max(r, std::abs(contracted[i]));
        return r;
    }
    double max_abs_expanded() const {
        double r = 0.0;
        for (std::size_t i = 0; i < expanded.size(); ++i)
            if (masked[i]) r = std::max(r, std::abs(expanded[i]));
        return r;
    }
    double max_discrepancy() const {
        double r = 0.0;
        for (std::size_t i = 0; i < expanded.size(); ++i)
            if (masked[i]) r = std::max(r, std::abs(expanded[i] - contracted[i]));
        return r;
    }
};

// Flags nodes within `radius` of a curvature jump: a nodal Hessian increment
// whose Frobenius norm exceeds 10x the median increment.
inline std::vector<char> jump_mask(const DiscreteFunction& u, int radius = 2) {
    const Grid& g = u.grid;
    auto jets = jet_field(u);
    std::vector<char> near_jump(jets.size(), 0);
    int mx = g.m[0], my = (g.n == 2) ? g.m[1] : 1;

    auto flag = [&](int ix, int iy) {
        for (int dy = -radius; dy <= radius; ++dy)
            for (int dx = -radius; dx <= radius; ++dx) {
                int jx = ix + dx, jy = iy + dy;
                if (jx < 0 || jx >= mx || jy < 0 || jy >= my) continue;
                near_jump[static_cast<std::size_t>(g.index(jx, jy))] = 1;
            }
    };

    for (int axis = 0; axis < g.n; ++axis) {
        std::vector<double> incs;
        std::vector<std::pair<int, int>> where;
        for (int iy = 0; iy < my; ++iy)
            for (int ix = 0; ix < mx; ++ix) {
                int jx = ix + (axis == 0 ? 1 : 0), jy = iy + (axis == 1 ? 1 : 0);
                if (jx >= mx || jy >= my) continue;
                SymMat d = jets[static_cast<std::size_t>(g.index(jx, jy))].jet.X +
                           jets[static_cast<std::size_t>(g.index(ix, iy))].jet.X * (-1.0);
                incs.push_back(d.frob());
                where.push_back({ix, iy});
            }
        std::vector<double> sorted = incs;
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2),
                         sorted.end());
        double med = sorted[sorted.size() / 2];
        double maxinc = *std::max_element(incs.begin(), incs.end());
        // absolute floor keeps roundoff jitter on piecewise-constant curvature
        // from being mistaken for jumps
        double cut = 10.0 * med + 1e-9 * (1.0 + maxinc);
        if (!(maxinc > cut)) continue;
        for (std::size_t k = 0; k < incs.size(); ++k)
            if (incs[k] > cut) flag(where[k].first, where[k].second);
    }
    return near_jump;
}

// Evaluates both realizations of the second-order operator on the grid.  The
// contracted form differentiates the composed scalar field by central
// differences; the expanded form assembles
//   L_k = H_xk + H_eta p_k + sum_i H_pi X_ik + sum_ij H_Xij Z_kij
// with Z the forward difference quotient of the nodal Hessian field, then
// contracts H_X : L (x) L.
inline ResidualField aronsson_residuals(const Supremand& H, const DiscreteFunction& u) {
    const Grid& g = u.grid;
    auto jets = jet_field(u);
    std::vector<double> f = hessian_energy_field(H, u);

    ResidualField out;
    out.grid = g;
    std::size_t N = jets.size();
    out.contracted.assign(N, 0.0);
    out.expanded.assign(N, 0.0);
    out.grad_h.assign(N, 0.0);
    out.valid.assign(N, 0);
    out.masked.assign(N, 0);

    std::vector<char> near_jump = jump_mask(u);
    int mx = g.m[0], my = (g.n == 2) ? g.m[1] : 1;
    double hx = g.h(0), hy = (g.n == 2) ? g.h(1) : 1.0;
    auto F = [&](int ix, int iy) { return f[static_cast<std::size_t>(g.index(ix, iy))]; };

    for (std::size_t i = 0; i < N; ++i) {
        auto [ix, iy] = g.coords(jets[i].node);
        // Boundary-node jets rely on reflected ghosts, which are exact only to
        // second order; keep the stencil two nodes inside so neither the
        // centered field differences nor the forward Hessian quotients touch them.
        bool ok = ix >= 2 && ix <= mx - 3 && (g.n == 1 || (iy >= 2 && iy <= my - 3));
        if (!ok) continue;
        out.valid[i] = 1;
        out.masked[i] = near_jump[i] ? 0 : 1;

        const Jet2& jet = jets[i].jet;
        SupremandGradient gi = H.partials(jet);

        Vec dh = Vec::zero(g.n);
        dh[0] = (F(ix + 1, iy) - F(ix - 1, iy)) / (2.0 * hx);
        if (g.n == 2) dh[1] = (F(ix, iy + 1) - F(ix, iy - 1)) / (2.0 * hy);
        out.grad_h[i] = dh.norm();
        out.contracted[i] = gi.d_X.mul(dh).dot(dh);

        // forward difference quotients of the Hessian field
        Vec L = Vec::zero(g.n);
        for (int k = 0; k < g.n; ++k) {
            int jx = ix + (k == 0 ? 1 : 0), jy = iy + (k == 1 ? 1 : 0);
            SymMat dX = jets[static_cast<std::size_t>(g.index(jx, jy))].jet.X + jet.X * (-1.0);
            double hk = (k == 0) ? hx : hy;
            double lk = gi.d_x[k] + gi.d_eta * jet.p[k];
            for (int ii = 0; ii < g.n; ++ii) lk += gi.d_p[ii] * jet.X(ii, k);
            lk += gi.d_X.ddot(dX * (1.0 / hk));
            L[k] = lk;
        }
        out.expanded[i] = gi.d_X.mul(L).dot(L);
    }
    return out;
}

inline void write_residual_csv(const ResidualField& r, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << (r.grid.n == 1 ? "x" : "x,y") << ",contracted,expanded,gradH,masked\n";
    for (int idx = 0; idx < r.grid.total_nodes(); ++idx) {
        std::size_t i = static_cast<std::size_t>(idx);
        Vec pos = r.grid.position(idx);
        os << fmt_double(pos[0]);
        if (r.grid.n == 2) os << ',' << fmt_double(pos[1]);
        os << ',' << fmt_double(r.contracted[i]) << ',' << fmt_double(r.expanded[i]) << ','
           << fmt_double(r.grad_h[i]) << ',' << int(r.masked[i]) << '\n';
    }
}

}  // namespace supinf
