#include "relgeo/euclid.hpp"

#include <cmath>

#include "relgeo/errors.hpp"

namespace relgeo {

EuclidFrame build_euclid_frame(const SurfaceDef& s, std::span<const double> p, int order) {
    if (!in_domain(s, p)) throw DomainError("chart point lies outside the surface domain");
    if (order < 2) throw OrderExceeded("frame construction needs jet order >= 2");
    return build_euclid_frame_from_jets(eval_surface(s, p, order), p);
}

EuclidFrame build_euclid_frame_from_jets(const VectorJet& x, std::span<const double> point,
                                         std::span<const double> orient_ref) {
    EuclidFrame f;
    f.n = x.n_vars();
    f.point.assign(point.begin(), point.end());
    if (x.dim() != f.n + 1) throw Error("immersion must map an n-chart into R^(n+1)");
    if (x.order() < 2) throw OrderExceeded("frame construction needs jet order >= 2");
    f.x = x;

    const int m = x.order();
    for (int i = 0; i < f.n; ++i) f.dx.push_back(x.derivative(i));

    const Jet proto1 = f.dx[0][0];
    f.g = JetMat(f.n, proto1);
    for (int i = 0; i < f.n; ++i)
        for (int j = 0; j <= i; ++j) {
            f.g(i, j) = dot(f.dx[i], f.dx[j]);
            if (j != i) f.g(j, i) = f.g(i, j);
        }

    // Rank test on the Gram matrix; the Hadamard bound makes the ratio
    // dimensionless.
    double diag_product = 1.0;
    for (int i = 0; i < f.n; ++i) diag_product *= std::max(f.g(i, i).value(), 0.0);
    const double det_g_value = det(f.g).value();
    if (diag_product <= 0.0 || det_g_value < 1e-12 * diag_product)
        throw DegenerateImmersion("tangent vectors are rank deficient at this point");

    f.cross_raw = cross_product(std::span<const VectorJet>(f.dx));
    f.normal_sign = 1.0;
    if (!orient_ref.empty()) {
        if (static_cast<int>(orient_ref.size()) != f.n + 1) throw Error("orientation reference rank mismatch");
        double d = 0.0;
        for (int k = 0; k <= f.n; ++k) d += f.cross_raw[k].value() * orient_ref[k];
        if (d < 0.0) f.normal_sign = -1.0;
    }
    const Jet inv_norm = f.normal_sign / sqrt(dot(f.cross_raw, f.cross_raw));
    f.xi = inv_norm * f.cross_raw;

    const VectorJet xi_low = f.xi.truncated(m - 2);
    f.h = JetMat(f.n, xi_low[0]);
    for (int i = 0; i < f.n; ++i)
        for (int j = 0; j <= i; ++j) {
            f.h(i, j) = dot(f.dx[i].derivative(j), xi_low);
            if (j != i) f.h(j, i) = f.h(i, j);
        }

    std::vector<VectorJet> dxi;
    for (int i = 0; i < f.n; ++i) dxi.push_back(f.xi.derivative(i));
    f.e = JetMat(f.n, f.h(0, 0));
    for (int i = 0; i < f.n; ++i)
        for (int j = 0; j <= i; ++j) {
            f.e(i, j) = dot(dxi[i], dxi[j]);
            if (j != i) f.e(j, i) = f.e(i, j);
        }

    const Jet det_h = det(f.h);
    const double h_scale = std::pow(f.h.value_norm() / f.n + 1e-30, f.n);
    if (std::abs(det_h.value()) < 1e-10 * h_scale ||
        f.h.value_norm() < 1e-12 * (1.0 + f.g.value_norm()))
        throw FlatPoint("second fundamental form is singular (Gaussian curvature ~ 0)");

    f.g_inv = inverse(f.g);
    f.h_inv = inverse(f.h);
    f.e_inv = inverse(f.e);
    f.Ktilde = det_h / det(f.g.truncated(m - 2));
    return f;
}

JetMat euclid_shape(const EuclidFrame& f) {
    const int t = f.h.order();
    JetMat S = f.h * f.g_inv.truncated(t);

    // Weingarten residual d_j xi + h_jk g^(km) d_m x = 0 at order 0.
    double scale = 0.0, worst = 0.0;
    for (int j = 0; j < f.n; ++j) {
        std::vector<double> r = f.xi.derivative(j).values();
        for (int k = 0; k < f.n; ++k) {
            const double s_jk = S(j, k).value();
            const std::vector<double> v = f.dx[k].values();
            for (std::size_t c = 0; c < r.size(); ++c) r[c] += s_jk * v[c];
        }
        double rn = 0.0;
        for (double v : r) rn += v * v;
        worst = std::max(worst, std::sqrt(rn));
        scale = std::max(scale, f.dx[j].value_norm());
    }
    if (worst > 1e-8 * (1.0 + scale))
        throw Error("Weingarten residual too large; frame is inconsistent");
    return S;
}

Jet gauss_curvature_of_map(const VectorJet& map, std::span<const double> point,
                           std::span<const double> orient_ref) {
    return build_euclid_frame_from_jets(map, point, orient_ref).Ktilde;
}

double shape_orientation_sign(const EuclidFrame& f) {
    double tr = 0.0;
    const Eigen::MatrixXd s = (f.h * f.g_inv.truncated(f.h.order())).values();
    for (int i = 0; i < f.n; ++i) tr += s(i, i);
    return tr >= 0.0 ? 1.0 : -1.0;
}

}  // namespace relgeo
