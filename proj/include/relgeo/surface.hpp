#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relgeo/expr.hpp"
#include "relgeo/jet.hpp"

namespace relgeo {

// Declarative description of an immersion x : M -> R^(n+1). Components carry
// resolved parameters; the domain box excludes rank drops and flat points of
// the catalog charts by construction (margin 1e-3 at chart singularities).
struct SurfaceDef {
    int n = 0;
    std::vector<ExprPtr> components;               // n + 1 expressions
    std::vector<std::array<double, 2>> domain;     // per-variable closed intervals
    std::string name;
    std::map<std::string, double> params;
};

struct NormalizationDef {
    enum class Kind { Euclidean, Equiaffine, Custom };

    Kind kind = Kind::Euclidean;
    ExprPtr expr;  // Custom only; must evaluate to nonzero q on the domain

    static NormalizationDef euclidean() { return {Kind::Euclidean, nullptr}; }
    static NormalizationDef equiaffine() { return {Kind::Equiaffine, nullptr}; }
    static NormalizationDef custom(ExprPtr e) { return {Kind::Custom, std::move(e)}; }
    static NormalizationDef custom(const std::string& text, int n_vars);

    std::string label() const;
};

// Built-in surfaces:
//   sphere     r > 0, n in {2,3}, orient in {+1,-1} (component swap flips the
//              normal without touching the metric)
//   ellipsoid  a, b, c > 0, n = 2
//   torus      R > rho > 0, n = 2; band = +1 outer ring, -1 inner ring (the
//              parabolic circles between them are excluded)
//   paraboloid n in {2,3}, height (a u1^2 + b u2^2 [+ c u3^2]) / 2
SurfaceDef catalog_surface(const std::string& name, const std::map<std::string, double>& params);

// Graph surface x = (u1, ..., un, f(u1..un)).
SurfaceDef graph_surface(const std::string& f_text, int n,
                         std::vector<std::array<double, 2>> domain = {});

// Surface from explicit component expressions.
SurfaceDef inline_surface(const std::vector<std::string>& component_texts, int n,
                          std::vector<std::array<double, 2>> domain,
                          const std::map<std::string, double>& params = {});

bool in_domain(const SurfaceDef& s, std::span<const double> point);

// Component jets at a chart point.
VectorJet eval_surface(const SurfaceDef& s, std::span<const double> point, int order);

// Component values at a chart point (plain recursive evaluation).
std::vector<double> eval_surface_values(const SurfaceDef& s, std::span<const double> point);

// Low-discrepancy points in the domain box (Halton, radical-inverse bases
// 2,3,5,7). A seed shifts the start index, so fixed seed means a fixed set.
std::vector<std::vector<double>> sample_points(const SurfaceDef& s, int count, std::uint64_t seed);

}  // namespace relgeo
