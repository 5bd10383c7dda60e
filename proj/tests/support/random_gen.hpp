#pragma once

#include <cmath>
#include <cstdint>

#include "relgeo/jet.hpp"

namespace relgeo::testing {

// Deterministic generator for property tests (splitmix64 + uniform mapping).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform(double lo, double hi) {
        const double t = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return lo + t * (hi - lo);
    }

private:
    std::uint64_t state_;
};

// Monomial u^alpha as a jet at the origin.
inline Jet monomial(const JetLayout& layout, int idx, int n_vars, int order) {
    Jet m = Jet::constant(1.0, n_vars, order);
    const MultiIndex& alpha = layout.exponents(idx);
    for (int v = 0; v < n_vars; ++v)
        for (int e = 0; e < alpha[v]; ++e) m = m * Jet::variable(0.0, v, n_vars, order);
    return m;
}

// Jet with coefficients uniform in [-1, 1]; the value is pushed away from 0
// when a floor is requested (for divisions and logarithms).
inline Jet random_jet(Rng& rng, int n_vars, int order, double value_floor = 0.0) {
    Jet acc = Jet::constant(0.0, n_vars, order);
    const JetLayout& layout = acc.layout();
    for (int i = 0; i < layout.size(); ++i)
        acc += rng.uniform(-1.0, 1.0) * monomial(layout, i, n_vars, order);
    if (value_floor > 0.0 && std::abs(acc.value()) < value_floor)
        acc += (acc.value() >= 0.0 ? 1.0 : -1.0) * (value_floor + 0.5);
    return acc;
}

}  // namespace relgeo::testing
