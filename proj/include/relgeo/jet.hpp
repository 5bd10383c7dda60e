#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "relgeo/errors.hpp"

namespace relgeo {

inline constexpr int kMaxVars = 4;
inline constexpr int kMaxOrder = 8;

// Exponent tuple of a partial derivative; entries past n_vars stay zero.
using MultiIndex = std::array<std::uint8_t, kMaxVars>;

MultiIndex make_multi_index(std::initializer_list<int> exponents);

// Enumeration of all multi-indices with |alpha| <= order for a fixed number of
// chart variables, in graded order (degree-major). Indices of degree <= d form
// a prefix, which is what makes truncation a plain copy. Layouts are interned:
// two jets agree in shape iff they share the layout pointer.
class JetLayout {
public:
    static const JetLayout& get(int n_vars, int order);

    int n_vars() const { return n_vars_; }
    int order() const { return order_; }
    int size() const { return static_cast<int>(exponents_.size()); }
    int size_at(int max_degree) const { return degree_offset_[max_degree + 1]; }

    const MultiIndex& exponents(int idx) const { return exponents_[idx]; }
    int degree(int idx) const { return degree_[idx]; }
    double factorial(int idx) const { return factorial_[idx]; }

    // -1 when alpha lies outside this layout.
    int index_of(const MultiIndex& alpha) const;

    // Index of alpha_a + alpha_b; requires degree(a) + degree(b) <= order.
    int product_index(int ia, int ib) const { return prod_[static_cast<std::size_t>(ia) * size() + ib]; }

    // Index of alpha + e_var, or -1 if that leaves the layout.
    int shift_up(int idx, int var) const;

private:
    JetLayout(int n_vars, int order);

    int n_vars_;
    int order_;
    std::vector<MultiIndex> exponents_;
    std::vector<int> degree_;
    std::vector<double> factorial_;
    std::vector<int> degree_offset_;  // degree_offset_[d] = first index of degree d
    std::vector<std::int32_t> prod_;
};

// Truncated multivariate Taylor expansion of a scalar field at a chart point.
// Coefficients are Taylor-normalized: coeff(alpha) = d^alpha f / alpha!, so
// multiplication is a plain truncated convolution. partial() rescales on exit.
class Jet {
public:
    Jet() = default;

    static Jet constant(double value, int n_vars, int order);
    static Jet variable(double value, int var, int n_vars, int order);

    bool valid() const { return layout_ != nullptr; }
    int n_vars() const { return layout_->n_vars(); }
    int order() const { return layout_->order(); }
    const JetLayout& layout() const { return *layout_; }

    double value() const { return c_[0]; }
    double coeff(int idx) const { return c_[idx]; }
    double coeff(const MultiIndex& alpha) const;

    // True partial derivative d^alpha f; throws OrderExceeded for |alpha| > order.
    double partial(const MultiIndex& alpha) const;

    // Jet of d_var f, one order lower. Throws OrderExceeded at order 0.
    Jet derivative(int var) const;

    Jet truncated(int new_order) const;

    // Same-shape constant (value v, zero derivatives).
    Jet like(double v) const { return constant(v, n_vars(), order()); }

    bool is_constant() const;

    Jet operator-() const;
    Jet& operator+=(const Jet& rhs);
    Jet& operator-=(const Jet& rhs);
    Jet& operator+=(double v);
    Jet& operator-=(double v);
    Jet& operator*=(double v);
    Jet& operator/=(double v);

    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator+(const Jet& a, double b);
    friend Jet operator+(double a, const Jet& b);
    friend Jet operator-(const Jet& a, double b);
    friend Jet operator-(double a, const Jet& b);
    friend Jet operator*(const Jet& a, double b);
    friend Jet operator*(double a, const Jet& b);
    friend Jet operator/(const Jet& a, double b);
    friend Jet operator/(double a, const Jet& b);

    friend Jet sin(const Jet& a);
    friend Jet cos(const Jet& a);
    friend Jet tan(const Jet& a);
    friend Jet exp(const Jet& a);
    friend Jet log(const Jet& a);
    friend Jet sqrt(const Jet& a);
    friend Jet abs(const Jet& a);
    friend Jet pow(const Jet& a, double r);
    friend Jet pow(const Jet& a, const Jet& b);

    // Evaluates sum_k s[k] * (a - a.value())^k; s must have order()+1 entries.
    Jet composed_with_series(std::span<const double> s) const;

private:
    explicit Jet(const JetLayout& layout) : layout_(&layout), c_(layout.size(), 0.0) {}

    static void require_same_shape(const Jet& a, const Jet& b);

    const JetLayout* layout_ = nullptr;
    std::vector<double> c_;
};

// Ambient-space vector whose components are jets sharing one shape.
class VectorJet {
public:
    VectorJet() = default;
    explicit VectorJet(std::vector<Jet> components);
    static VectorJet zero(int dim, const Jet& proto);

    int dim() const { return static_cast<int>(c_.size()); }
    int n_vars() const { return c_[0].n_vars(); }
    int order() const { return c_[0].order(); }

    const Jet& operator[](int i) const { return c_[i]; }
    Jet& operator[](int i) { return c_[i]; }

    VectorJet derivative(int var) const;
    VectorJet truncated(int new_order) const;
    std::vector<double> values() const;
    double value_norm() const;

    VectorJet& operator+=(const VectorJet& rhs);
    VectorJet& operator-=(const VectorJet& rhs);

    friend VectorJet operator+(const VectorJet& a, const VectorJet& b);
    friend VectorJet operator-(const VectorJet& a, const VectorJet& b);
    friend VectorJet operator*(const Jet& s, const VectorJet& v);
    friend VectorJet operator*(const VectorJet& v, const Jet& s);
    friend VectorJet operator*(double s, const VectorJet& v);
    friend VectorJet operator*(const VectorJet& v, double s);

    friend Jet dot(const VectorJet& a, const VectorJet& b);

private:
    std::vector<Jet> c_;
};

// Generalized cross product of n vectors in R^(n+1): the unique N with
// <N, w> = det(w, v_1, ..., v_n) for every w. Cofactor expansion, exact in
// jet arithmetic.
VectorJet cross_product(std::span<const VectorJet> vectors);

}  // namespace relgeo
