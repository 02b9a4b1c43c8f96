#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "grid.hpp"
#include "io.hpp"
#include "supremand.hpp"

namespace supinf {

// One-dimensional expanded operator at a jet with explicit third-derivative
// surrogate Z:  A(jet, Z) = H_X * L^2,  L = H_x + H_eta p + H_p X + H_X Z.
// Returns {A, L}; the product form is the definition, so callers can test the
// factorization against an independently assembled contraction.
inline std::pair<double, double> expanded_operator_1d(const Supremand& H, const Jet2& jet,
                                                      double Z) {
    SupremandGradient g = H.partials(jet);
    double L = g.d_x[0] + g.d_eta * jet.p[0] + g.d_p[0] * jet.X(0, 0) + g.d_X(0, 0) * Z;
    return {g.d_X(0, 0) * L * L, L};
}

struct DiffuseAtom {
    double value = 0.0;
    double mass = 0.0;
};

// Empirical measure of forward difference quotients of the nodal second
// derivative field, taken at steps {k*h : k in step_multiples}.  Quotients
// beyond escape_threshold in magnitude are booked as escaped mass rather than
// atoms; nearby finite quotients merge into one atom.
struct NodeDiffuse {
    int node = 0;
    bool admissible = false;  // all stencils stay inside the grid
    std::vector<DiffuseAtom> atoms;
    double escaped_mass = 0.0;
};

struct YoungOptions {
    std::vector<int> step_multiples = {8, 4, 2, 1};
    double escape_threshold = 0.0;  // 0: default 1/(2 * largest step)
    double atom_merge = 1e-3;       // relative merge radius for quotient atoms
    double tol = 1e-6;              // operator tolerance for the node verdict
};

inline std::vector<NodeDiffuse> difference_quotients(const DiscreteFunction& u,
                                                     const YoungOptions& opts) {
    const Grid& g = u.grid;
    if (g.n != 1) throw contract_violation("difference_quotients: one-dimensional only");
    if (opts.step_multiples.empty())
        throw contract_violation("difference_quotients: empty step list");
    for (int k : opts.step_multiples)
        if (k < 1) throw contract_violation("difference_quotients: step multiples must be >= 1");

    auto jets = jet_field(u);
    int m = g.m[0];
    double h = g.h(0);
    int kmax = *std::max_element(opts.step_multiples.begin(), opts.step_multiples.end());
    double escape = opts.escape_threshold > 0.0 ? opts.escape_threshold : 1.0 / (2.0 * kmax * h);
    double mass = 1.0 / static_cast<double>(opts.step_multiples.size());

    std::vector<NodeDiffuse> out(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        NodeDiffuse& nd = out[static_cast<std::size_t>(i)];
        nd.node = i;
        if (i + kmax > m - 1) continue;
        nd.admissible = true;
        double Xi = jets[static_cast<std::size_t>(i)].jet.X(0, 0);
        for (int k : opts.step_multiples) {
            double Z = (jets[static_cast<std::size_t>(i + k)].jet.X(0, 0) - Xi) / (k * h);
            if (std::abs(Z) > escape) {
                nd.escaped_mass += mass;
                continue;
            }
            bool merged = false;
            for (auto& a : nd.atoms)
                if (std::abs(a.value - Z) <= opts.atom_merge * (1.0 + std::abs(Z))) {
                    a.value = (a.value * a.mass + Z * mass) / (a.mass + mass);
                    a.mass += mass;
                    merged = true;
                    break;
                }
            if (!merged) nd.atoms.push_back({Z, mass});
        }
    }
    return out;
}

struct NodeVerdict {
    int node = 0;
    bool admissible = false;
    double sup_finite = 0.0;  // sup over retained atoms of |A(jet, Z)|
    double escaped_mass = 0.0;
    bool pass = false;
};

struct CriterionReport {
    Grid grid;
    std::vector<NodeVerdict> nodes;
    int admissible = 0;
    int passed = 0;
    double pass_rate() const {
        return admissible > 0 ? static_cast<double>(passed) / admissible : 0.0;
    }
};

// Reduced-support generalized-solution test: at every admissible node the
// operator must vanish (within tol) on each retained quotient atom.  Escaped
// mass does not fail a node; it records where the quotient family has no
// finite limit.
inline CriterionReport dsolution_criterion(const Supremand& H, const DiscreteFunction& u,
                                           const YoungOptions& opts) {
    const Grid& g = u.grid;
    auto jets = jet_field(u);
    auto diffuse = difference_quotients(u, opts);

    CriterionReport rep;
    rep.grid = g;
    rep.nodes.resize(diffuse.size());
    for (std::size_t i = 0; i < diffuse.size(); ++i) {
        NodeVerdict& v = rep.nodes[i];
        v.node = diffuse[i].node;
        v.admissible = diffuse[i].admissible;
        v.escaped_mass = diffuse[i].escaped_mass;
        if (!v.admissible) continue;
        ++rep.admissible;
        for (const auto& atom : diffuse[i].atoms) {
            auto [A, L] = expanded_operator_1d(H, jets[i].jet, atom.value);
            (void)L;
            v.sup_finite = std::max(v.sup_finite, std::abs(A));
        }
        v.pass = v.sup_finite <= opts.tol;
        if (v.pass) ++rep.passed;
    }
    return rep;
}

inline void write_criterion_csv(const CriterionReport& rep, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "x,sup_finite,escaped_mass,pass\n";
    for (const auto& v : rep.nodes) {
        if (!v.admissible) continue;
        os << fmt_double(rep.grid.position(v.node)[0]) << ',' << fmt_double(v.sup_finite) << ','
           << fmt_double(v.escaped_mass) << ',' << int(v.pass) << '\n';
    }
}

}  // namespace supinf
