#include "relgeo/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace relgeo {

namespace {

constexpr double kDivisionFloor = 1e-120;

std::uint32_t pack(const MultiIndex& alpha) {
    return static_cast<std::uint32_t>(alpha[0]) | (static_cast<std::uint32_t>(alpha[1]) << 8) |
           (static_cast<std::uint32_t>(alpha[2]) << 16) | (static_cast<std::uint32_t>(alpha[3]) << 24);
}

// Pack-keyed lookup, shared by all layouts of one shape.
struct IndexMap {
    std::unordered_map<std::uint32_t, int> map;
};

double fact_int(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

MultiIndex make_multi_index(std::initializer_list<int> exponents) {
    if (static_cast<int>(exponents.size()) > kMaxVars) throw Error("multi-index has too many entries");
    MultiIndex alpha{};
    int i = 0;
    for (int e : exponents) {
        if (e < 0 || e > 255) throw Error("multi-index exponent out of range");
        alpha[i++] = static_cast<std::uint8_t>(e);
    }
    return alpha;
}

JetLayout::JetLayout(int n_vars, int order) : n_vars_(n_vars), order_(order) {
    // Degree-major enumeration; within a degree the first variable varies
    // slowest, descending. Independent of `order`, so prefixes line up across
    // layouts of the same n_vars.
    degree_offset_.assign(order + 2, 0);
    MultiIndex alpha{};
    auto emit = [&](const MultiIndex& a, int deg) {
        exponents_.push_back(a);
        degree_.push_back(deg);
        double fact = 1.0;
        for (int v = 0; v < n_vars_; ++v) fact *= fact_int(a[v]);
        factorial_.push_back(fact);
    };
    for (int deg = 0; deg <= order; ++deg) {
        degree_offset_[deg] = static_cast<int>(exponents_.size());
        auto rec = [&](auto&& self, int var, int remaining) -> void {
            if (var == n_vars_ - 1) {
                alpha[var] = static_cast<std::uint8_t>(remaining);
                emit(alpha, deg);
                alpha[var] = 0;
                return;
            }
            for (int e = remaining; e >= 0; --e) {
                alpha[var] = static_cast<std::uint8_t>(e);
                self(self, var + 1, remaining - e);
            }
            alpha[var] = 0;
        };
        rec(rec, 0, deg);
    }
    degree_offset_[order + 1] = static_cast<int>(exponents_.size());

    const int n = size();
    prod_.assign(static_cast<std::size_t>(n) * n, -1);
    std::unordered_map<std::uint32_t, int> lookup;
    lookup.reserve(n * 2);
    for (int i = 0; i < n; ++i) lookup.emplace(pack(exponents_[i]), i);
    for (int ia = 0; ia < n; ++ia) {
        const int max_b_degree = order - degree_[ia];
        const int nb = size_at(max_b_degree);
        for (int ib = 0; ib < nb; ++ib) {
            MultiIndex sum{};
            for (int v = 0; v < kMaxVars; ++v)
                sum[v] = static_cast<std::uint8_t>(exponents_[ia][v] + exponents_[ib][v]);
            prod_[static_cast<std::size_t>(ia) * n + ib] = lookup.at(pack(sum));
        }
    }
}

const JetLayout& JetLayout::get(int n_vars, int order) {
    if (n_vars < 1 || n_vars > kMaxVars) throw Error("jet n_vars must be in [1, " + std::to_string(kMaxVars) + "]");
    if (order < 0 || order > kMaxOrder) throw Error("jet order must be in [0, " + std::to_string(kMaxOrder) + "]");
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{n_vars, order}];
    if (!slot) slot.reset(new JetLayout(n_vars, order));
    return *slot;
}

int JetLayout::index_of(const MultiIndex& alpha) const {
    int deg = 0;
    for (int v = 0; v < kMaxVars; ++v) {
        if (v >= n_vars_ && alpha[v] != 0) return -1;
        deg += alpha[v];
    }
    if (deg > order_) return -1;
    // Linear scan within the degree block; blocks are tiny at desk scale.
    for (int i = degree_offset_[deg]; i < degree_offset_[deg + 1]; ++i)
        if (exponents_[i] == alpha) return i;
    return -1;
}

int JetLayout::shift_up(int idx, int var) const {
    MultiIndex alpha = exponents_[idx];
    alpha[var] = static_cast<std::uint8_t>(alpha[var] + 1);
    return index_of(alpha);
}

Jet Jet::constant(double value, int n_vars, int order) {
    Jet j(JetLayout::get(n_vars, order));
    j.c_[0] = value;
    return j;
}

Jet Jet::variable(double value, int var, int n_vars, int order) {
    if (var < 0 || var >= n_vars) throw Error("variable index " + std::to_string(var) + " out of range");
    Jet j(JetLayout::get(n_vars, order));
    j.c_[0] = value;
    if (order >= 1) {
        MultiIndex alpha{};
        alpha[var] = 1;
        j.c_[j.layout_->index_of(alpha)] = 1.0;
    }
    return j;
}

double Jet::coeff(const MultiIndex& alpha) const {
    const int idx = layout_->index_of(alpha);
    if (idx < 0) throw OrderExceeded("multi-index outside jet order");
    return c_[idx];
}

double Jet::partial(const MultiIndex& alpha) const {
    const int idx = layout_->index_of(alpha);
    if (idx < 0) throw OrderExceeded("requested partial exceeds jet order");
    return c_[idx] * layout_->factorial(idx);
}

Jet Jet::derivative(int var) const {
    if (var < 0 || var >= n_vars()) throw Error("derivative variable out of range");
    if (order() == 0) throw OrderExceeded("cannot differentiate an order-0 jet");
    const JetLayout& res_layout = JetLayout::get(n_vars(), order() - 1);
    Jet res(res_layout);
    for (int i = 0; i < res_layout.size(); ++i) {
        const int src = layout_->shift_up(i, var);  // same enumeration, richer layout
        res.c_[i] = c_[src] * (res_layout.exponents(i)[var] + 1);
    }
    return res;
}

Jet Jet::truncated(int new_order) const {
    if (new_order > order()) throw OrderExceeded("cannot extend a jet to higher order");
    if (new_order == order()) return *this;
    const JetLayout& res_layout = JetLayout::get(n_vars(), new_order);
    Jet res(res_layout);
    std::copy(c_.begin(), c_.begin() + res_layout.size(), res.c_.begin());
    return res;
}

bool Jet::is_constant() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0.0) return false;
    return true;
}

void Jet::require_same_shape(const Jet& a, const Jet& b) {
    if (!a.valid() || !b.valid()) throw Error("operation on an uninitialized jet");
    if (a.layout_ != b.layout_)
        throw Error("jet shape mismatch: (" + std::to_string(a.n_vars()) + " vars, order " +
                    std::to_string(a.order()) + ") vs (" + std::to_string(b.n_vars()) + " vars, order " +
                    std::to_string(b.order()) + ")");
}

Jet Jet::operator-() const {
    Jet res = *this;
    for (double& v : res.c_) v = -v;
    return res;
}

Jet& Jet::operator+=(const Jet& rhs) {
    require_same_shape(*this, rhs);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
    require_same_shape(*this, rhs);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
    return *this;
}

Jet& Jet::operator+=(double v) {
    c_[0] += v;
    return *this;
}

Jet& Jet::operator-=(double v) {
    c_[0] -= v;
    return *this;
}

Jet& Jet::operator*=(double v) {
    for (double& x : c_) x *= v;
    return *this;
}

Jet& Jet::operator/=(double v) {
    if (std::abs(v) < kDivisionFloor) throw DivisionByZeroValue("scalar division by zero");
    for (double& x : c_) x /= v;
    return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
    Jet res = a;
    res += b;
    return res;
}

Jet operator-(const Jet& a, const Jet& b) {
    Jet res = a;
    res -= b;
    return res;
}

Jet operator*(const Jet& a, const Jet& b) {
    Jet::require_same_shape(a, b);
    const JetLayout& layout = *a.layout_;
    Jet res(layout);
    const int order = layout.order();
    const int n = layout.size();
    for (int ia = 0; ia < n; ++ia) {
        const double av = a.c_[ia];
        if (av == 0.0) continue;
        const int nb = layout.size_at(order - layout.degree(ia));
        for (int ib = 0; ib < nb; ++ib) {
            const double bv = b.c_[ib];
            if (bv != 0.0) res.c_[layout.product_index(ia, ib)] += av * bv;
        }
    }
    return res;
}

Jet operator/(const Jet& a, const Jet& b) {
    Jet::require_same_shape(a, b);
    const double b0 = b.value();
    if (std::abs(b0) < kDivisionFloor) throw DivisionByZeroValue("jet division by zero value");
    // 1/b = (1/b0) * sum_k (-(b - b0)/b0)^k, truncated; Horner form.
    Jet w = b;
    w /= -b0;
    w += 1.0;  // w = -(b - b0)/b0, zero constant term
    Jet acc = b.like(1.0);
    for (int k = 0; k < b.order(); ++k) {
        acc = acc * w;
        acc += 1.0;
    }
    acc /= b0;
    return a * acc;
}

Jet operator+(const Jet& a, double b) {
    Jet r = a;
    r += b;
    return r;
}
Jet operator+(double a, const Jet& b) {
    Jet r = b;
    r += a;
    return r;
}
Jet operator-(const Jet& a, double b) {
    Jet r = a;
    r -= b;
    return r;
}
Jet operator-(double a, const Jet& b) {
    Jet r = -b;
    r += a;
    return r;
}
Jet operator*(const Jet& a, double b) {
    Jet r = a;
    r *= b;
    return r;
}
Jet operator*(double a, const Jet& b) {
    Jet r = b;
    r *= a;
    return r;
}
Jet operator/(const Jet& a, double b) {
    Jet r = a;
    r /= b;
    return r;
}
Jet operator/(double a, const Jet& b) {
    return b.like(a) / b;
}

Jet Jet::composed_with_series(std::span<const double> s) const {
    if (static_cast<int>(s.size()) != order() + 1) throw Error("series length must be order + 1");
    Jet w = *this;
    w.c_[0] = 0.0;
    Jet acc = like(s[order()]);
    for (int k = order() - 1; k >= 0; --k) {
        acc = acc * w;
        acc += s[k];
    }
    return acc;
}

Jet sin(const Jet& a) {
    const double v = a.value();
    std::vector<double> s(a.order() + 1);
    double fact = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        if (k > 0) fact *= k;
        s[k] = std::sin(v + k * 1.5707963267948966) / fact;
    }
    return a.composed_with_series(s);
}

Jet cos(const Jet& a) {
    const double v = a.value();
    std::vector<double> s(a.order() + 1);
    double fact = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        if (k > 0) fact *= k;
        s[k] = std::cos(v + k * 1.5707963267948966) / fact;
    }
    return a.composed_with_series(s);
}

Jet tan(const Jet& a) {
    return sin(a) / cos(a);
}

Jet exp(const Jet& a) {
    const double ev = std::exp(a.value());
    std::vector<double> s(a.order() + 1);
    double fact = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        if (k > 0) fact *= k;
        s[k] = ev / fact;
    }
    return a.composed_with_series(s);
}

Jet log(const Jet& a) {
    const double v = a.value();
    if (v <= 0.0) throw DomainError("ln of a non-positive value");
    std::vector<double> s(a.order() + 1);
    s[0] = std::log(v);
    double vk = v;
    for (int k = 1; k <= a.order(); ++k) {
        s[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (k * vk);
        vk *= v;
    }
    return a.composed_with_series(s);
}

Jet sqrt(const Jet& a) {
    if (a.value() <= 0.0) throw DomainError("sqrt of a non-positive value");
    return pow(a, 0.5);
}

Jet abs(const Jet& a) {
    const double v = a.value();
    if (v == 0.0) throw DomainError("abs at a zero crossing is not differentiable");
    return v > 0.0 ? a : -a;
}

Jet pow(const Jet& a, double r) {
    const double rounded = std::round(r);
    if (std::abs(r - rounded) < 1e-12 && std::abs(rounded) <= 64.0) {
        // Integral exponent: repeated multiplication, valid for any base value.
        long e = static_cast<long>(rounded);
        if (e == 0) return a.like(1.0);
        const bool invert = e < 0;
        e = std::labs(e);
        Jet base = a;
        Jet acc = a.like(1.0);
        while (e > 0) {
            if (e & 1) acc = acc * base;
            e >>= 1;
            if (e > 0) base = base * base;
        }
        return invert ? a.like(1.0) / acc : acc;
    }
    const double v = a.value();
    if (v <= 0.0) throw DomainError("pow with non-integral exponent needs a positive base");
    std::vector<double> s(a.order() + 1);
    double coeff = std::pow(v, r);  // r(r-1)...(r-k+1) v^(r-k) / k!
    s[0] = coeff;
    for (int k = 1; k <= a.order(); ++k) {
        coeff *= (r - (k - 1)) / (k * v);
        s[k] = coeff;
    }
    return a.composed_with_series(s);
}

Jet pow(const Jet& a, const Jet& b) {
    if (b.is_constant()) return pow(a, b.value());
    if (a.value() <= 0.0) throw DomainError("pow with varying exponent needs a positive base");
    return exp(b * log(a));
}

VectorJet::VectorJet(std::vector<Jet> components) : c_(std::move(components)) {
    if (c_.empty()) throw Error("empty vector jet");
    for (const Jet& j : c_)
        if (!j.valid() || &j.layout() != &c_[0].layout()) throw Error("vector jet components must share one shape");
}

VectorJet VectorJet::zero(int dim, const Jet& proto) {
    return VectorJet(std::vector<Jet>(dim, proto.like(0.0)));
}

VectorJet VectorJet::derivative(int var) const {
    std::vector<Jet> out;
    out.reserve(c_.size());
    for (const Jet& j : c_) out.push_back(j.derivative(var));
    return VectorJet(std::move(out));
}

VectorJet VectorJet::truncated(int new_order) const {
    std::vector<Jet> out;
    out.reserve(c_.size());
    for (const Jet& j : c_) out.push_back(j.truncated(new_order));
    return VectorJet(std::move(out));
}

std::vector<double> VectorJet::values() const {
    std::vector<double> out;
    out.reserve(c_.size());
    for (const Jet& j : c_) out.push_back(j.value());
    return out;
}

double VectorJet::value_norm() const {
    double s = 0.0;
    for (const Jet& j : c_) s += j.value() * j.value();
    return std::sqrt(s);
}

VectorJet& VectorJet::operator+=(const VectorJet& rhs) {
    if (dim() != rhs.dim()) throw Error("vector jet dimension mismatch");
    for (int i = 0; i < dim(); ++i) c_[i] += rhs.c_[i];
    return *this;
}

VectorJet& VectorJet::operator-=(const VectorJet& rhs) {
    if (dim() != rhs.dim()) throw Error("vector jet dimension mismatch");
    for (int i = 0; i < dim(); ++i) c_[i] -= rhs.c_[i];
    return *this;
}

VectorJet operator+(const VectorJet& a, const VectorJet& b) {
    VectorJet r = a;
    r += b;
    return r;
}

VectorJet operator-(const VectorJet& a, const VectorJet& b) {
    VectorJet r = a;
    r -= b;
    return r;
}

VectorJet operator*(const Jet& s, const VectorJet& v) {
    std::vector<Jet> out;
    out.reserve(v.dim());
    for (int i = 0; i < v.dim(); ++i) out.push_back(s * v[i]);
    return VectorJet(std::move(out));
}

VectorJet operator*(const VectorJet& v, const Jet& s) {
    return s * v;
}

VectorJet operator*(double s, const VectorJet& v) {
    std::vector<Jet> out;
    out.reserve(v.dim());
    for (int i = 0; i < v.dim(); ++i) out.push_back(s * v[i]);
    return VectorJet(std::move(out));
}

VectorJet operator*(const VectorJet& v, double s) {
    return s * v;
}

Jet dot(const VectorJet& a, const VectorJet& b) {
    if (a.dim() != b.dim()) throw Error("vector jet dimension mismatch");
    Jet s = a[0] * b[0];
    for (int i = 1; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

namespace {

// Determinant of a matrix of jets by cofactor expansion along the first row.
// Division-free; rows index entries[i*n + j].
Jet jet_det(const std::vector<const Jet*>& entries, int n) {
    if (n == 1) return *entries[0];
    if (n == 2) return (*entries[0]) * (*entries[3]) - (*entries[1]) * (*entries[2]);
    Jet acc = entries[0]->like(0.0);
    std::vector<const Jet*> minor((n - 1) * (n - 1));
    for (int col = 0; col < n; ++col) {
        int m = 0;
        for (int i = 1; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (j != col) minor[m++] = entries[i * n + j];
        Jet term = (*entries[col]) * jet_det(minor, n - 1);
        if (col % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    return acc;
}

}  // namespace

VectorJet cross_product(std::span<const VectorJet> vectors) {
    const int n = static_cast<int>(vectors.size());
    if (n < 2) throw Error("cross product needs at least two vectors");
    const int dim = vectors[0].dim();
    if (dim != n + 1) throw Error("cross product needs n vectors in R^(n+1)");
    std::vector<Jet> out;
    out.reserve(dim);
    std::vector<const Jet*> minor(n * n);
    for (int k = 0; k < dim; ++k) {
        int m = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < dim; ++j)
                if (j != k) minor[m++] = &vectors[i][j];
        Jet cof = jet_det(minor, n);
        out.push_back(k % 2 == 0 ? cof : -cof);
    }
    return VectorJet(std::move(out));
}

}  // namespace relgeo
