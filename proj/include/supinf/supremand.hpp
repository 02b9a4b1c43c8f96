#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jet.hpp"

namespace supinf {

// All four partial derivatives of H at a jet.
struct SupremandGradient {
    Vec d_x;
    double d_eta = 0.0;
    Vec d_p;
    SymMat d_X;
};

// Declared coercivity constants: H >= C1|X| - C2(1 + |eta|^s + |p|^t).
struct Coercivity {
    double C1 = 0.0;
    double C2 = 0.0;
    double s = 0.0;
    double t = 0.0;
};

// The supremand H(x, eta, p, X) with analytic partials and structural
// metadata.  Instances are immutable after construction and safe to share
// across threads.
class Supremand {
  public:
    explicit Supremand(int dim) : n_(dim) {}
    virtual ~Supremand() = default;

    int dimension() const { return n_; }
    double lower_bound() const { return m_; }
    const std::optional<Coercivity>& coercivity() const { return coercivity_; }
    bool level_convex_in_X() const { return level_convex_; }
    const std::string& smooth_region() const { return smooth_region_; }
    const std::string& name() const { return name_; }

    double value(const Jet2& jet) const {
        check_dim(jet);
        return value_impl(jet);
    }

    SupremandGradient partials(const Jet2& jet) const {
        check_dim(jet);
        return partials_impl(jet);
    }

  protected:
    virtual double value_impl(const Jet2& jet) const = 0;
    virtual SupremandGradient partials_impl(const Jet2& jet) const = 0;

    void check_dim(const Jet2& jet) const {
        if (jet.dim() != n_)
            throw contract_violation("supremand: jet dimension " + std::to_string(jet.dim()) +
                                     " != " + std::to_string(n_));
    }

    int n_;
    double m_ = 0.0;
    std::optional<Coercivity> coercivity_;
    bool level_convex_ = false;
    std::string smooth_region_ = "everywhere";
    std::string name_ = "supremand";
};

using SupremandPtr = std::shared_ptr<const Supremand>;

inline double eval(const Supremand& H, const Jet2& jet) { return H.value(jet); }
inline SupremandGradient partials(const Supremand& H, const Jet2& jet) { return H.partials(jet); }

// H(X) = |X| (Frobenius).  Not differentiable at X = 0.
class PureHessianNorm final : public Supremand {
  public:
    explicit PureHessianNorm(int dim) : Supremand(dim) {
        name_ = "pure-hessian-norm";
        coercivity_ = Coercivity{1.0, 1.0, 0.0, 0.0};
        level_convex_ = true;
        smooth_region_ = "X != 0";
    }

  protected:
    double value_impl(const Jet2& jet) const override { return jet.X.frob(); }

    SupremandGradient partials_impl(const Jet2& jet) const override {
        double r = jet.X.frob();
        if (r == 0.0) throw non_differentiable_point("pure-hessian-norm: partials at X = 0");
        SupremandGradient g;
        g.d_x = Vec::zero(n_);
        g.d_p = Vec::zero(n_);
        g.d_X = jet.X * (1.0 / r);
        return g;
    }
};

// H(X) = sqrt(|X|^2 + eps^2) - eps.  Smooth everywhere; the optimization
// surrogate for PureHessianNorm.
class SmoothedHessianNorm final : public Supremand {
  public:
    SmoothedHessianNorm(int dim, double eps) : Supremand(dim), eps_(eps) {
        name_ = "smoothed-hessian-norm";
        coercivity_ = Coercivity{1.0, std::max(eps, 1e-300), 0.0, 0.0};
        level_convex_ = true;
    }
    double eps() const { return eps_; }

  protected:
    double value_impl(const Jet2& jet) const override {
        return std::sqrt(jet.X.frob2() + eps_ * eps_) - eps_;
    }

    SupremandGradient partials_impl(const Jet2& jet) const override {
        SupremandGradient g;
        g.d_x = Vec::zero(n_);
        g.d_p = Vec::zero(n_);
        g.d_X = jet.X * (1.0 / std::sqrt(jet.X.frob2() + eps_ * eps_));
        return g;
    }

  private:
    double eps_;
};

// H(X) = |X|^2.
class SquaredHessian final : public Supremand {
  public:
    explicit SquaredHessian(int dim) : Supremand(dim) {
        name_ = "squared-hessian";
        coercivity_ = Coercivity{1.0, 1.0, 0.0, 0.0};  // |X|^2 >= |X| - 1
        level_convex_ = true;
    }

  protected:
    double value_impl(const Jet2& jet) const override { return jet.X.frob2(); }

    SupremandGradient partials_impl(const Jet2& jet) const override {
        SupremandGradient g;
        g.d_x = Vec::zero(n_);
        g.d_p = Vec::zero(n_);
        g.d_X = jet.X * 2.0;
        return g;
    }
};

// H(x,eta,p,X) = |X|^2 + beta |X| / (1 + |eta|^s + |p|^t).  Lower-order
// coupling example; smooth away from X = 0 (and away from eta = 0 / p = 0
// when the exponents are fractional).
class LowerOrderExample final : public Supremand {
  public:
    LowerOrderExample(int dim, double s, double t, double beta)
        : Supremand(dim), s_(s), t_(t), beta_(beta) {
        name_ = "lower-order";
        coercivity_ = Coercivity{1.0, 1.0, 0.0, 0.0};  // dominated by the |X|^2 term
        level_convex_ = true;
        smooth_region_ = "X != 0 (and eta != 0, p != 0 for fractional exponents)";
    }

  protected:
    double value_impl(const Jet2& jet) const override {
        double r = jet.X.frob();
        return r * r + beta_ * r / denom(jet);
    }

    SupremandGradient partials_impl(const Jet2& jet) const override {
        double r = jet.X.frob();
        if (r == 0.0) throw non_differentiable_point("lower-order: partials at X = 0");
        if (s_ > 0.0 && s_ < 1.0 && jet.eta == 0.0)
            throw non_differentiable_point("lower-order: partials at eta = 0");
        if (t_ > 0.0 && t_ < 1.0 && jet.p.norm() == 0.0)
            throw non_differentiable_point("lower-order: partials at p = 0");
        double d = denom(jet);
        SupremandGradient g;
        g.d_x = Vec::zero(n_);
        g.d_X = jet.X * (2.0 + beta_ / (r * d));
        // d/d eta of 1/d = -(s |eta|^{s-1} sign(eta)) / d^2
        if (s_ > 0.0) {
            double de = s_ * std::pow(std::abs(jet.eta), s_ - 1.0) * (jet.eta >= 0.0 ? 1.0 : -1.0);
            g.d_eta = -beta_ * r * de / (d * d);
        }
        g.d_p = Vec::zero(n_);
        if (t_ > 0.0) {
            double pn = jet.p.norm();
            if (pn > 0.0) {
                double dp = t_ * std::pow(pn, t_ - 1.0);
                g.d_p = jet.p * (-beta_ * r * dp / (pn * d * d));
            }
        }
        return g;
    }

  private:
    double denom(const Jet2& jet) const {
        return 1.0 + std::pow(std::abs(jet.eta), s_) + std::pow(jet.p.norm(), t_);
    }
    double s_, t_, beta_;
};

// H(x,eta,p,X) = h(x,eta,p,X^T X) for a user-supplied h that is strictly
// increasing along t -> h(.,.,., t I).  Partials come from the chain rule
// d/dX h(X^2) = h_S X + X h_S.
class HCompose final : public Supremand {
  public:
    using ScalarFn = std::function<double(const Vec&, double, const Vec&, const SymMat&)>;
    struct HPartials {
        Vec d_x;
        double d_eta = 0.0;
        Vec d_p;
        SymMat d_S;
    };
    using PartialsFn = std::function<HPartials(const Vec&, double, const Vec&, const SymMat&)>;

    HCompose(int dim, ScalarFn h, PartialsFn hgrad, std::string label = "hcompose")
        : Supremand(dim), h_(std::move(h)), hgrad_(std::move(hgrad)) {
        name_ = std::move(label);
        level_convex_ = false;
    }

    double h_at(const Vec& x, double eta, const Vec& p, const SymMat& S) const {
        return h_(x, eta, p, S);
    }

  protected:
    double value_impl(const Jet2& jet) const override {
        return h_(jet.x, jet.eta, jet.p, jet.X.squared());
    }

    SupremandGradient partials_impl(const Jet2& jet) const override {
        HPartials hp = hgrad_(jet.x, jet.eta, jet.p, jet.X.squared());
        SupremandGradient g;
        g.d_x = hp.d_x;
        g.d_eta = hp.d_eta;
        g.d_p = hp.d_p;
        g.d_X = hp.d_S.sym_prod(jet.X) * 2.0;  // h_S X + X h_S
        return g;
    }

  private:
    ScalarFn h_;
    PartialsFn hgrad_;
};

// h(S) = tr S, so H(X) = |X|^2; a convenient HCompose instance for tests.
inline SupremandPtr make_hcompose_trace(int dim) {
    HCompose::ScalarFn h = [](const Vec&, double, const Vec&, const SymMat& S) {
        double tr = S.e[0];
        if (S.n == 2) tr += S.e[2];
        return tr;
    };
    HCompose::PartialsFn hg = [dim](const Vec&, double, const Vec&, const SymMat&) {
        HCompose::HPartials hp;
        hp.d_x = Vec::zero(dim);
        hp.d_p = Vec::zero(dim);
        hp.d_S = SymMat::identity(dim);
        return hp;
    };
    return std::make_shared<HCompose>(dim, h, hg, "hcompose:trace");
}

// Max relative error between analytic partials and central differences of
// eval, over all jet coordinates.
inline double check_partials_fd(const Supremand& H, const Jet2& jet, double step) {
    if (step <= 0.0) throw contract_violation("check_partials_fd: step must be positive");
    SupremandGradient g = H.partials(jet);
    int n = jet.dim();
    double worst = 0.0;
    auto scale = [&](double analytic) { return 1.0 + std::abs(analytic); };
    auto record = [&](double analytic, double fd) {
        worst = std::max(worst, std::abs(analytic - fd) / scale(analytic));
    };

    for (int i = 0; i < n; ++i) {
        Jet2 jp = jet, jm = jet;
        jp.x[i] += step;
        jm.x[i] -= step;
        record(g.d_x[i], (H.value(jp) - H.value(jm)) / (2.0 * step));
    }
    {
        Jet2 jp = jet, jm = jet;
        jp.eta += step;
        jm.eta -= step;
        record(g.d_eta, (H.value(jp) - H.value(jm)) / (2.0 * step));
    }
    for (int i = 0; i < n; ++i) {
        Jet2 jp = jet, jm = jet;
        jp.p[i] += step;
        jm.p[i] -= step;
        record(g.d_p[i], (H.value(jp) - H.value(jm)) / (2.0 * step));
    }
    // Off-diagonal entries are stored once; perturbing e[1] moves both X_12
    // and X_21, so the finite difference sees d/dX_12 + d/dX_21 = 2 d_X(0,1).
    int nent = (n == 1) ? 1 : 3;
    for (int k = 0; k < nent; ++k) {
        Jet2 jp = jet, jm = jet;
        jp.X.e[static_cast<std::size_t>(k)] += step;
        jm.X.e[static_cast<std::size_t>(k)] -= step;
        double fd = (H.value(jp) - H.value(jm)) / (2.0 * step);
        double mult = (n == 2 && k == 1) ? 2.0 : 1.0;
        double analytic = mult * ((n == 1) ? g.d_X.e[0] : g.d_X.e[static_cast<std::size_t>(k)]);
        record(analytic, fd);
    }
    return worst;
}

// --- registry -------------------------------------------------------------
//
// Built-in supremands are addressable as `name[:key=value,...]`, e.g.
// "smoothed-hessian-norm:eps=0.1".

inline SupremandPtr make_supremand(const std::string& spec, int dim) {
    std::string name = spec;
    std::map<std::string, double> kv;
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        name = spec.substr(0, colon);
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                throw contract_violation("supremand spec: expected key=value in '" + item + "'");
            try {
                kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            } catch (const std::exception&) {
                throw contract_violation("supremand spec: bad float in '" + item + "'");
            }
        }
    }
    auto get = [&](const std::string& key, double dflt) {
        auto it = kv.find(key);
        return it == kv.end() ? dflt : it->second;
    };
    if (name == "pure-hessian-norm") return std::make_shared<PureHessianNorm>(dim);
    if (name == "smoothed-hessian-norm")
        return std::make_shared<SmoothedHessianNorm>(dim, get("eps", 1e-3));
    if (name == "squared-hessian") return std::make_shared<SquaredHessian>(dim);
    if (name == "lower-order")
        return std::make_shared<LowerOrderExample>(dim, get("s", 0.5), get("t", 0.5), get("beta", 1.0));
    if (name == "hcompose-trace") return make_hcompose_trace(dim);
    throw contract_violation("unknown supremand '" + name + "'");
}

}  // namespace supinf
