#include "relgeo/surface.hpp"

#include <cmath>
#include <cstdio>

#include "relgeo/errors.hpp"

namespace relgeo {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kChartMargin = 1e-3;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double get_param(const std::map<std::string, double>& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

SurfaceDef make_def(std::string name, int n, const std::vector<std::string>& texts,
                    std::vector<std::array<double, 2>> domain,
                    std::map<std::string, double> params) {
    SurfaceDef def;
    def.n = n;
    def.name = std::move(name);
    def.params = std::move(params);
    def.domain = std::move(domain);
    for (const std::string& t : texts) def.components.push_back(parse_expression(t, n));
    return def;
}

}  // namespace

NormalizationDef NormalizationDef::custom(const std::string& text, int n_vars) {
    return custom(parse_expression(text, n_vars));
}

std::string NormalizationDef::label() const {
    switch (kind) {
        case Kind::Euclidean:
            return "euclidean";
        case Kind::Equiaffine:
            return "equiaffine";
        case Kind::Custom:
            return "custom:" + (expr ? to_string(*expr) : std::string("?"));
    }
    return "?";
}

SurfaceDef catalog_surface(const std::string& name, const std::map<std::string, double>& params) {
    const double eps = kChartMargin;
    if (name == "sphere") {
        const double r = get_param(params, "r", 1.0);
        const int n = static_cast<int>(get_param(params, "n", 2.0));
        const double orient = get_param(params, "orient", 1.0);
        if (r <= 0.0) throw BadParams("sphere: r must be positive");
        if (n != 2 && n != 3) throw BadParams("sphere: n must be 2 or 3");
        if (orient != 1.0 && orient != -1.0) throw BadParams("sphere: orient must be +1 or -1");
        const std::string rs = fmt(r);
        std::vector<std::string> texts;
        std::vector<std::array<double, 2>> domain;
        if (n == 2) {
            texts = {rs + "*cos(u1)*cos(u2)", rs + "*sin(u1)*cos(u2)", rs + "*sin(u2)"};
            domain = {{-kPi + eps, kPi - eps}, {-kPi / 2 + eps, kPi / 2 - eps}};
        } else {
            texts = {rs + "*cos(u1)*cos(u2)*cos(u3)", rs + "*sin(u1)*cos(u2)*cos(u3)",
                     rs + "*sin(u2)*cos(u3)", rs + "*sin(u3)"};
            domain = {{-kPi + eps, kPi - eps},
                      {-kPi / 2 + eps, kPi / 2 - eps},
                      {-kPi / 2 + eps, kPi / 2 - eps}};
        }
        if (orient < 0.0) std::swap(texts[0], texts[1]);
        return make_def("sphere", n, texts, std::move(domain), params);
    }
    if (name == "ellipsoid") {
        const double a = get_param(params, "a", 1.0);
        const double b = get_param(params, "b", 1.2);
        const double c = get_param(params, "c", 1.5);
        if (a <= 0.0 || b <= 0.0 || c <= 0.0) throw BadParams("ellipsoid: semi-axes must be positive");
        std::vector<std::string> texts = {fmt(a) + "*cos(u1)*cos(u2)", fmt(b) + "*sin(u1)*cos(u2)",
                                          fmt(c) + "*sin(u2)"};
        std::vector<std::array<double, 2>> domain = {{-kPi + eps, kPi - eps},
                                                     {-kPi / 2 + eps, kPi / 2 - eps}};
        return make_def("ellipsoid", 2, texts, std::move(domain), params);
    }
    if (name == "torus") {
        const double R = get_param(params, "R", 2.0);
        const double rho = get_param(params, "rho", 0.5);
        const double band = get_param(params, "band", 1.0);
        if (rho <= 0.0 || R <= rho) throw BadParams("torus: need R > rho > 0");
        if (band != 1.0 && band != -1.0) throw BadParams("torus: band must be +1 or -1");
        std::vector<std::string> texts = {"(" + fmt(R) + "+" + fmt(rho) + "*cos(u2))*cos(u1)",
                                          "(" + fmt(R) + "+" + fmt(rho) + "*cos(u2))*sin(u1)",
                                          fmt(rho) + "*sin(u2)"};
        // The Gaussian curvature vanishes where cos(u2) = 0; stay a margin
        // away from both of those circles.
        const double delta = std::asin(eps);
        std::vector<std::array<double, 2>> domain(2);
        domain[0] = {-kPi + eps, kPi - eps};
        domain[1] = band > 0.0 ? std::array<double, 2>{-kPi / 2 + delta, kPi / 2 - delta}
                               : std::array<double, 2>{kPi / 2 + delta, 3 * kPi / 2 - delta};
        return make_def("torus", 2, texts, std::move(domain), params);
    }
    if (name == "paraboloid") {
        const int n = static_cast<int>(get_param(params, "n", 2.0));
        const double a = get_param(params, "a", 1.0);
        const double b = get_param(params, "b", 1.0);
        const double c = get_param(params, "c", 1.0);
        if (n != 2 && n != 3) throw BadParams("paraboloid: n must be 2 or 3");
        if (a <= 0.0 || b <= 0.0 || c <= 0.0) throw BadParams("paraboloid: coefficients must be positive");
        std::string height = "(" + fmt(a) + "*u1^2+" + fmt(b) + "*u2^2";
        if (n == 3) height += "+" + fmt(c) + "*u3^2";
        height += ")/2";
        std::vector<std::string> texts;
        for (int i = 0; i < n; ++i) texts.push_back(std::string("u") + static_cast<char>('1' + i));
        texts.push_back(height);
        std::vector<std::array<double, 2>> domain(n, {-1.0, 1.0});
        return make_def("paraboloid", n, texts, std::move(domain), params);
    }
    throw UnknownSurface("unknown catalog surface '" + name + "'");
}

SurfaceDef graph_surface(const std::string& f_text, int n, std::vector<std::array<double, 2>> domain) {
    if (n != 2 && n != 3) throw BadParams("graph surface: n must be 2 or 3");
    if (domain.empty()) domain.assign(n, {-1.0, 1.0});
    if (static_cast<int>(domain.size()) != n) throw BadParams("graph surface: domain rank mismatch");
    std::vector<std::string> texts;
    for (int i = 0; i < n; ++i) texts.push_back(std::string("u") + static_cast<char>('1' + i));
    texts.push_back(f_text);
    SurfaceDef def = make_def("graph", n, texts, std::move(domain), {});
    return def;
}

SurfaceDef inline_surface(const std::vector<std::string>& component_texts, int n,
                          std::vector<std::array<double, 2>> domain,
                          const std::map<std::string, double>& params) {
    if (static_cast<int>(component_texts.size()) != n + 1)
        throw BadParams("inline surface: need n + 1 component expressions");
    if (static_cast<int>(domain.size()) != n) throw BadParams("inline surface: domain rank mismatch");
    SurfaceDef def = make_def("inline", n, component_texts, std::move(domain), params);
    if (!def.params.empty())
        for (ExprPtr& c : def.components) c = resolve_params(c, def.params);
    return def;
}

bool in_domain(const SurfaceDef& s, std::span<const double> point) {
    if (static_cast<int>(point.size()) != s.n) return false;
    for (int i = 0; i < s.n; ++i)
        if (point[i] < s.domain[i][0] || point[i] > s.domain[i][1]) return false;
    return true;
}

VectorJet eval_surface(const SurfaceDef& s, std::span<const double> point, int order) {
    if (static_cast<int>(point.size()) != s.n) throw Error("chart point rank mismatch");
    std::vector<Jet> parts;
    parts.reserve(s.components.size());
    for (const ExprPtr& c : s.components) parts.push_back(eval_jet(*c, point, order));
    return VectorJet(std::move(parts));
}

std::vector<double> eval_surface_values(const SurfaceDef& s, std::span<const double> point) {
    std::vector<double> out;
    out.reserve(s.components.size());
    for (const ExprPtr& c : s.components) out.push_back(eval_value(*c, point));
    return out;
}

namespace {

double radical_inverse(std::uint64_t index, unsigned base) {
    double inv = 1.0 / base, result = 0.0, scale = inv;
    while (index > 0) {
        result += static_cast<double>(index % base) * scale;
        index /= base;
        scale *= inv;
    }
    return result;
}

}  // namespace

std::vector<std::vector<double>> sample_points(const SurfaceDef& s, int count, std::uint64_t seed) {
    static const unsigned bases[kMaxVars] = {2, 3, 5, 7};
    std::vector<std::vector<double>> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const std::uint64_t index = seed + static_cast<std::uint64_t>(i) + 1;
        std::vector<double> p(s.n);
        for (int d = 0; d < s.n; ++d) {
            const double t = radical_inverse(index, bases[d]);
            p[d] = s.domain[d][0] + t * (s.domain[d][1] - s.domain[d][0]);
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace relgeo
