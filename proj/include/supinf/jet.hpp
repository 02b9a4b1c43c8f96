#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace supinf {

struct contract_violation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct non_differentiable_point : std::domain_error {
    using std::domain_error::domain_error;
};

// Small dense vector in R^n, n in {1,2}.
struct Vec {
    int n = 1;
    std::array<double, 2> v{0.0, 0.0};

    Vec() = default;
    explicit Vec(double x) : n(1), v{x, 0.0} {}
    Vec(double x, double y) : n(2), v{x, y} {}
    static Vec zero(int dim) {
        Vec r;
        r.n = dim;
        return r;
    }

    double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

    double norm() const { return n == 1 ? std::abs(v[0]) : std::hypot(v[0], v[1]); }
    double dot(const Vec& o) const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += v[static_cast<std::size_t>(i)] * o[i];
        return s;
    }
    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n; ++i) (*this)[i] += o[i];
        return *this;
    }
    Vec operator*(double a) const {
        Vec r = *this;
        for (int i = 0; i < n; ++i) r[i] *= a;
        return r;
    }
};

// Symmetric n x n matrix stored as the upper triangle (n <= 2).
struct SymMat {
    int n = 1;
    // 1D: e[0] = a11.  2D: e[0] = a11, e[1] = a12 (= a21), e[2] = a22.
    std::array<double, 3> e{0.0, 0.0, 0.0};

    SymMat() = default;
    explicit SymMat(double a11) : n(1), e{a11, 0.0, 0.0} {}
    SymMat(double a11, double a12, double a22) : n(2), e{a11, a12, a22} {}
    static SymMat zero(int dim) {
        SymMat r;
        r.n = dim;
        return r;
    }
    static SymMat identity(int dim) {
        SymMat r = zero(dim);
        r.e[0] = 1.0;
        if (dim == 2) r.e[2] = 1.0;
        return r;
    }

    double operator()(int i, int j) const {
        if (n == 1) return e[0];
        if (i == 0 && j == 0) return e[0];
        if (i == 1 && j == 1) return e[2];
        return e[1];
    }
    void set(int i, int j, double val) {
        if (n == 1) {
            e[0] = val;
            return;
        }
        if (i == 0 && j == 0)
            e[0] = val;
        else if (i == 1 && j == 1)
            e[2] = val;
        else
            e[1] = val;
    }

    // Frobenius norm; the matrix norm used everywhere.
    double frob2() const {
        if (n == 1) return e[0] * e[0];
        return e[0] * e[0] + 2.0 * e[1] * e[1] + e[2] * e[2];
    }
    double frob() const { return std::sqrt(frob2()); }

    // Frobenius inner product A : B.
    double ddot(const SymMat& o) const {
        if (n == 1) return e[0] * o.e[0];
        return e[0] * o.e[0] + 2.0 * e[1] * o.e[1] + e[2] * o.e[2];
    }

    SymMat& operator+=(const SymMat& o) {
        for (int k = 0; k < 3; ++k) e[static_cast<std::size_t>(k)] += o.e[static_cast<std::size_t>(k)];
        return *this;
    }
    SymMat operator*(double a) const {
        SymMat r = *this;
        for (auto& x : r.e) x *= a;
        return r;
    }
    SymMat operator+(const SymMat& o) const {
        SymMat r = *this;
        r += o;
        return r;
    }
    SymMat operator-(const SymMat& o) const {
        SymMat r = *this;
        for (int k = 0; k < 3; ++k) r.e[static_cast<std::size_t>(k)] -= o.e[static_cast<std::size_t>(k)];
        return r;
    }

    // Matrix square X^T X (= X^2 for symmetric X).
    SymMat squared() const {
        if (n == 1) return SymMat(e[0] * e[0]);
        return SymMat(e[0] * e[0] + e[1] * e[1], e[1] * (e[0] + e[2]), e[1] * e[1] + e[2] * e[2]);
    }

    // Matrix product A*B + B*A symmetrized is not needed; plain product of two
    // symmetric matrices (result symmetrized, used for chain rules).
    SymMat sym_prod(const SymMat& o) const {
        if (n == 1) return SymMat(e[0] * o.e[0]);
        // (A B + B A)/2 entries
        double a11 = e[0] * o.e[0] + e[1] * o.e[1];
        double a22 = e[1] * o.e[1] + e[2] * o.e[2];
        double a12 = 0.5 * (e[0] * o.e[1] + e[1] * o.e[2] + o.e[0] * e[1] + o.e[1] * e[2]);
        return SymMat(a11, a12, a22);
    }

    // Matrix-vector product.
    Vec mul(const Vec& x) const {
        if (n == 1) return Vec(e[0] * x[0]);
        return Vec(e[0] * x[0] + e[1] * x[1], e[1] * x[0] + e[2] * x[1]);
    }
};

// Fully symmetric 3-tensor in R^{n x n x n}, n <= 2.  Distinct entries:
// 1D: z111.  2D: z111, z112, z122, z222.
struct Sym3 {
    int n = 1;
    std::array<double, 4> z{0.0, 0.0, 0.0, 0.0};

    Sym3() = default;
    explicit Sym3(double z111) : n(1), z{z111, 0.0, 0.0, 0.0} {}
    static Sym3 zero(int dim) {
        Sym3 r;
        r.n = dim;
        return r;
    }

    double operator()(int i, int j, int k) const {
        if (n == 1) return z[0];
        int ones = i + j + k;
        return z[static_cast<std::size_t>(ones)];
    }
    void set_distinct(int ones, double val) { z[static_cast<std::size_t>(ones)] = val; }

    double norm() const {
        if (n == 1) return std::abs(z[0]);
        // multiplicities 1,3,3,1
        return std::sqrt(z[0] * z[0] + 3.0 * z[1] * z[1] + 3.0 * z[2] * z[2] + z[3] * z[3]);
    }

    // Contraction H_X : Z over the last two indices, giving a vector:
    // (A:Z)_k = sum_{ij} A_ij Z_kij.
    Vec contract(const SymMat& a) const {
        Vec r = Vec::zero(n);
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += a(i, j) * (*this)(k, i, j);
            r[k] = s;
        }
        return r;
    }
};

// A point's second-order jet (x, u(x), Du(x), D^2u(x)).
struct Jet2 {
    Vec x;
    double eta = 0.0;
    Vec p;
    SymMat X;

    Jet2() = default;
    Jet2(Vec x_, double eta_, Vec p_, SymMat X_) : x(x_), eta(eta_), p(p_), X(X_) {
        if (x.n != p.n || x.n != X.n) throw contract_violation("Jet2: inconsistent dimensions");
    }
    int dim() const { return x.n; }
};

}  // namespace supinf
