#include "relgeo/parallel.hpp"

#include <algorithm>
#include <cmath>

#include "relgeo/errors.hpp"

namespace relgeo {

namespace {

VectorJet aligned(const VectorJet& v, int order) {
    return v.order() == order ? v : v.truncated(order);
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd values_of(const VectorJet& v) {
    Eigen::VectorXd out(v.dim());
    for (int i = 0; i < v.dim(); ++i) out[i] = v[i].value();
    return out;
}

double rel_vec_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).norm() / (1.0 + std::max(a.norm(), b.norm()));
}

}  // namespace

bool IdentityReport::all_pass() const {
    for (const IdentityRecord& r : records)
        if (r.applicable() && !r.pass) return false;
    return true;
}

const IdentityRecord* IdentityReport::find(const std::string& id) const {
    for (const IdentityRecord& r : records)
        if (r.id == id) return &r;
    return nullptr;
}

FrameBundle build_frames(const SurfaceDef& s, const NormalizationDef& nd,
                         std::span<const double> p, int order) {
    FrameBundle b;
    b.euclid = build_euclid_frame(s, p, order);
    b.rel = build_relative_frame(b.euclid, nd);
    return b;
}

FrameBundle offset_frames(const FrameBundle& base, double mu) {
    const Eigen::MatrixXd B = base.rel.B_mix.values();
    const int n = base.euclid.n;
    const double A = (Eigen::MatrixXd::Identity(n, n) - mu * B).determinant();
    if (std::abs(A) < 1e-10)
        throw SingularFamily("offset distance hits the singular locus det(I - mu B) = 0");

    const int t = std::min(base.euclid.x.order(), base.rel.y.order());
    VectorJet x_star = aligned(base.euclid.x, t);
    x_star += mu * aligned(base.rel.y, t);

    FrameBundle star;
    star.euclid = build_euclid_frame_from_jets(x_star, base.euclid.point, base.euclid.xi.values());
    star.rel = build_relative_frame_with_normal(star.euclid, base.rel.y);
    return star;
}

FamilyDeterminant family_determinant(const RelativeFrame& rel, const CurvatureData& curv, double mu) {
    FamilyDeterminant out;
    const int n = rel.n;
    const Eigen::MatrixXd B = rel.B_mix.values();
    out.det_route = (Eigen::MatrixXd::Identity(n, n) - mu * B).determinant();

    out.poly_route = 0.0;
    for (int r = 0; r <= n; ++r) out.poly_route += binomial(n, r) * curv.H[r] * std::pow(-mu, r);

    out.eigen_route = 1.0;
    for (double k : curv.k) out.eigen_route *= 1.0 - mu * k;

    bool radii_ok = true;
    for (const auto& r : curv.R) radii_ok = radii_ok && r.has_value();
    if (radii_ok) {
        double prod = (n % 2 == 0) ? curv.K : -curv.K;
        for (const auto& r : curv.R) prod *= mu - *r;
        out.radii_route = prod;
    }

    out.max_disagreement = std::max(rel_diff(out.det_route, out.poly_route),
                                    rel_diff(out.det_route, out.eigen_route));
    if (out.radii_route)
        out.max_disagreement = std::max(out.max_disagreement, rel_diff(out.det_route, *out.radii_route));
    return out;
}

Jet family_determinant_jet(const RelativeFrame& rel, double mu) {
    const JetMat M = JetMat::identity(rel.n, rel.B_mix(0, 0)) - mu * rel.B_mix;
    return det(M);
}

namespace {

void add_record(std::vector<IdentityRecord>& records, std::string id, std::string formula,
                double residual, double tolerance) {
    records.push_back({std::move(id), std::move(formula), residual, tolerance,
                       residual <= tolerance, std::string()});
}

void add_skipped(std::vector<IdentityRecord>& records, std::string id, std::string formula,
                 std::string reason) {
    records.push_back({std::move(id), std::move(formula), 0.0, 0.0, true, std::move(reason)});
}

}  // namespace

IdentityReport verify_transform(const FrameBundle& base, double mu, const VerifyTolerances& tol) {
    IdentityReport rep;
    rep.mu = mu;
    const int n = base.euclid.n;

    const FrameBundle star = offset_frames(base, mu);
    const CurvatureData curv = principal_curvatures(base.rel);
    const CurvatureData curv_star = principal_curvatures(star.rel);

    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd Mb = base.rel.B_mix.values();
    const Eigen::MatrixXd Ms = star.rel.B_mix.values();
    const FamilyDeterminant fam = family_determinant(base.rel, curv, mu);
    const double A = fam.det_route;

    rep.A = A;
    rep.k_star = curv_star.k;
    rep.H_star = curv_star.H;
    rep.Kstar = curv_star.K;

    auto& rc = rep.records;

    // Shared data along the family.
    add_record(rc, "unit_normal_shared", "xi* = xi",
               rel_vec_diff(values_of(star.euclid.xi), values_of(base.euclid.xi)), tol.normal);
    add_record(rc, "tangent_plane_scaling", "d1x* X ... X dnx* = A (d1x X ... X dnx)",
               rel_vec_diff(values_of(star.euclid.cross_raw),
                            A * values_of(base.euclid.cross_raw)),
               tol.identity);
    add_record(rc, "support_shared", "q* = q",
               rel_diff(star.rel.q.value(), base.rel.q.value()), tol.identity);
    add_record(rc, "conormal_shared", "X* = X",
               rel_vec_diff(values_of(star.rel.X), values_of(base.rel.X)), tol.identity);
    add_record(rc, "covariant_shape_shared", "B*_ij = B_ij",
               rel_diff(star.rel.B_cov.values(), base.rel.B_cov.values()), tol.identity);

    // Fundamental-form offsets.
    add_record(rc, "second_form_offset", "II* = II - mu q B",
               rel_diff(star.euclid.h.values(),
                        base.euclid.h.values() - mu * base.rel.q.value() * base.rel.B_cov.values()),
               tol.identity);
    add_record(rc, "relative_metric_offset", "G* = G - mu B",
               rel_diff(star.rel.G.values(), base.rel.G.values() - mu * base.rel.B_cov.values()),
               tol.identity);

    // Mixed-shape relations.
    add_record(rc, "mixed_shape_relation", "B = B* (I - mu B)  and  B* = B (I + mu B*)",
               std::max(rel_diff(Mb, Ms * (I - mu * Mb)), rel_diff(Ms, Mb * (I + mu * Ms))),
               tol.identity);
    add_record(rc, "mixed_shape_commutation", "B B* = B* B",
               rel_diff(Mb * Ms, Ms * Mb), tol.identity);
    add_record(rc, "shape_resolvent", "B* = (I - mu B)^(-1) B",
               rel_diff(Ms, (I - mu * Mb).inverse() * Mb), tol.identity);

    // Curvature maps.
    add_record(rc, "relative_curvature_ratio", "K* = K / A",
               rel_diff(curv_star.K, curv.K / A), tol.identity);
    {
        std::vector<double> mapped;
        for (double k : curv.k) mapped.push_back(k / (1.0 - mu * k));
        std::sort(mapped.begin(), mapped.end());
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(curv_star.k[i] - mapped[i]) / (1.0 + std::abs(mapped[i])));
        add_record(rc, "principal_curvature_map", "k*_i = k_i / (1 - mu k_i)", worst, tol.identity);
    }
    {
        bool radii_ok = true;
        for (const auto& r : curv.R) radii_ok = radii_ok && r.has_value();
        for (const auto& r : curv_star.R) radii_ok = radii_ok && r.has_value();
        if (!radii_ok) {
            add_skipped(rc, "radius_shift", "R*_i = R_i - mu",
                        "a relative principal curvature is below the radius threshold");
        } else {
            std::vector<double> shifted, star_radii;
            for (const auto& r : curv.R) shifted.push_back(*r - mu);
            for (const auto& r : curv_star.R) star_radii.push_back(*r);
            std::sort(shifted.begin(), shifted.end());
            std::sort(star_radii.begin(), star_radii.end());
            double worst = 0.0;
            for (int i = 0; i < n; ++i)
                worst = std::max(worst,
                                 std::abs(star_radii[i] - shifted[i]) / (1.0 + std::abs(shifted[i])));
            add_record(rc, "radius_shift", "R*_i = R_i - mu", worst, tol.identity);
        }
    }
    {
        // Transported principal vectors k*_i u_i stay principal for omega*.
        const Eigen::MatrixXd Ss = Ms.transpose();
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            const double k_star = curv.k[i] / (1.0 - mu * curv.k[i]);
            Eigen::VectorXd v = k_star * to_eigen(curv.U[i]);
            if (v.norm() < 1e-12) v = to_eigen(curv.U[i]);  // k* = 0: test the direction itself
            worst = std::max(worst, (Ss * v - k_star * v).norm() / ((1.0 + std::abs(k_star)) * v.norm()));
        }
        add_record(rc, "principal_vector_transport", "omega*(k*_i u_i) = k*_i (k*_i u_i)", worst,
                   tol.identity);
    }

    // Mean-curvature transforms from the derivatives of A as a polynomial in mu.
    {
        double worst = 0.0;
        for (int s = 0; s <= n; ++s) {
            double deriv = 0.0;  // d^s A / d mu^s from the polynomial coefficients
            for (int r = s; r <= n; ++r) {
                double fall = 1.0;
                for (int j = 0; j < s; ++j) fall *= r - j;
                deriv += std::pow(-1.0, r) * fall * binomial(n, r) * curv.H[r] * std::pow(mu, r - s);
            }
            double s_fact = 1.0;
            for (int j = 2; j <= s; ++j) s_fact *= j;
            const double H_star_s = std::pow(-1.0, s) / (s_fact * binomial(n, s) * A) * deriv;
            worst = std::max(worst, rel_diff(H_star_s, curv_star.H[s]));
        }
        add_record(rc, "mean_curvature_transform",
                   "H*_s = (-1)^s / (s! C(n,s) A) d^s A / d mu^s", worst, tol.identity);
    }
    if (std::abs(curv.K) < 1e-10 || std::abs(curv_star.K) < 1e-10) {
        add_skipped(rc, "mean_ratio_shift", "H*_(n-1)/K* = H_(n-1)/K - mu",
                    "relative curvature is numerically zero");
    } else {
        add_record(rc, "mean_ratio_shift", "H*_(n-1)/K* = H_(n-1)/K - mu",
                   rel_diff(curv_star.H[n - 1] / curv_star.K, curv.H[n - 1] / curv.K - mu),
                   tol.identity);
    }
    {
        double sum = 0.0;
        for (int r = 1; r <= n; ++r)
            sum += std::pow(-1.0, r + 1) * r * binomial(n, r) * curv.H[r] * std::pow(mu, r - 1);
        add_record(rc, "mean_curvature_first",
                   "H* = (1/(n A)) sum_r (-1)^(r+1) r C(n,r) H_r mu^(r-1)",
                   rel_diff(sum / (n * A), curv_star.H[1]), tol.identity);
    }

    // Gaussian-curvature ratios.
    if (std::abs(curv.K) < 1e-10 || std::abs(curv_star.K) < 1e-10) {
        add_skipped(rc, "gauss_ratio_invariant", "Ktilde*/K* = Ktilde/K",
                    "relative curvature is numerically zero");
    } else {
        add_record(rc, "gauss_ratio_invariant", "Ktilde*/K* = Ktilde/K",
                   rel_diff(star.euclid.Ktilde.value() / curv_star.K,
                            base.euclid.Ktilde.value() / curv.K),
                   tol.identity);
    }
    add_record(rc, "gauss_ratio_jacobian", "Ktilde*/Ktilde = 1/A",
               rel_diff(star.euclid.Ktilde.value() / base.euclid.Ktilde.value(), 1.0 / A),
               tol.identity);

    // Relative image, shared between the base and every offset. A constant
    // relative normal (improper affine sphere) has no image hypersurface.
    try {
        const ImageForms base_img = relative_image_forms(base.euclid, base.rel);
        const ImageForms star_img = relative_image_forms(star.euclid, star.rel);
        add_record(rc, "image_metric", "g_bar_ij = B_i^k B_j^m g_km", base_img.g_residual,
                   tol.identity);
        add_record(rc, "image_second_form", "h_bar_ij = -B_i^k h_kj", base_img.h_residual,
                   tol.identity);
        add_record(rc, "image_form_scaled", "II_bar = -q B", base_img.form_scale_residual,
                   tol.identity);
        add_record(rc, "curvature_quotient", "K = (-1)^n Ktilde / Ktilde_bar", base_img.K_residual,
                   tol.identity);
        add_record(rc, "image_shared", "image forms of the offset equal those of the base",
                   std::max(rel_diff(star_img.g_bar_contracted.values(),
                                     base_img.g_bar_direct.values()),
                            rel_diff(star_img.h_bar_contracted.values(),
                                     base_img.h_bar_direct.values())),
                   tol.identity);
    } catch (const Error& err) {
        const std::string reason =
            std::string("relative normalization is not an immersion here (") + err.what() + ")";
        add_skipped(rc, "image_metric", "g_bar_ij = B_i^k B_j^m g_km", reason);
        add_skipped(rc, "image_second_form", "h_bar_ij = -B_i^k h_kj", reason);
        add_skipped(rc, "image_form_scaled", "II_bar = -q B", reason);
        add_skipped(rc, "curvature_quotient", "K = (-1)^n Ktilde / Ktilde_bar", reason);
        add_skipped(rc, "image_shared", "image forms of the offset equal those of the base",
                    reason);
    }

    // Determinant routes.
    add_record(rc, "family_determinant_routes",
               "det(I - mu B) = sum_r C(n,r) H_r (-mu)^r = prod_i (1 - mu k_i)",
               fam.max_disagreement, tol.routes);

    // Two-route consistency inside the base frame.
    if (base.rel.phi_defined) {
        add_record(rc, "tcheby_routes", "T^m = (1/n) A_i^(im)  vs  T^i = G^(ij) d_j ln phi",
                   base.rel.tcheby_route_residual, tol.identity);
    } else {
        add_skipped(rc, "tcheby_routes", "T^m = (1/n) A_i^(im)  vs  T^i = G^(ij) d_j ln phi",
                    "Tchebychev function undefined (q/q_aff <= 0)");
    }
    add_record(rc, "laplace_routes", "Delta^G x / n = T + y", base.rel.laplace_residual,
               tol.identity);

    return rep;
}

double derivative_check(const FrameBundle& base, double mu, double delta) {
    const FrameBundle star = offset_frames(base, mu);
    const FrameBundle plus = offset_frames(base, mu + delta);
    const FrameBundle minus = offset_frames(base, mu - delta);
    const Eigen::MatrixXd D = (plus.rel.B_mix.values() - minus.rel.B_mix.values()) / (2.0 * delta);
    const Eigen::MatrixXd Ms = star.rel.B_mix.values();
    return rel_diff(D, Eigen::MatrixXd(Ms * Ms));
}

AffineTransport affine_transport(const FrameBundle& base, const FrameBundle& star, double mu,
                                 const VerifyTolerances& tol) {
    AffineTransport out;
    const int n = base.euclid.n;

    const Jet A_jet = family_determinant_jet(base.rel, mu);
    out.A = A_jet.value();
    if (A_jet.order() < 1)
        throw OrderExceeded("affine transport needs one derivative of det(I - mu B)");

    std::vector<VectorJet> dxi;
    for (int i = 0; i < n; ++i) dxi.push_back(base.euclid.xi.derivative(i));

    // grad of ln|A| on the spherical image.
    const Jet lnA = log(abs(A_jet));
    const VectorJet w = beltrami1(base.euclid.e, lnA, dxi);

    const double q_over = base.rel.q.value() / (2.0 * n);
    const Eigen::VectorXd w_v = values_of(w);

    // Tchebychev and Laplace transports.
    const Eigen::VectorXd T_transport = values_of(base.rel.T_ambient) - q_over * w_v;
    out.tcheby_residual = rel_vec_diff(values_of(star.rel.T_ambient), T_transport);
    const Eigen::VectorXd L_transport = values_of(base.rel.laplace) - q_over * w_v;
    out.laplace_residual = rel_vec_diff(values_of(star.rel.laplace), L_transport);

    // Support function and Tchebychev function of the affine normalization.
    const double scale = std::pow(std::abs(out.A), -1.0 / (n + 2));
    out.q_aff_residual =
        rel_diff(star.rel.q_aff.value(), scale * base.rel.q_aff.value());
    if (base.rel.phi_defined && star.rel.phi_defined) {
        out.phi_residual = rel_diff(star.rel.phi.value(),
                                    std::pow(std::abs(out.A), 1.0 / (2.0 * n)) * base.rel.phi.value());
    } else {
        out.phi_residual = -1.0;  // marked below as skipped
    }

    // Affine normal transport: |A|^(-1/(n+2)) y_aff + q_aff grad_III(|A|^(-1/(n+2))).
    {
        const VectorJet y_aff = relative_normal(base.rel.q_aff, base.euclid);
        const VectorJet y_aff_star = relative_normal(star.rel.q_aff, star.euclid);
        const Jet s_jet = pow(abs(A_jet), -1.0 / (n + 2));
        const VectorJet grad_s = beltrami1(base.euclid.e, s_jet, dxi);
        const Eigen::VectorXd transport =
            scale * values_of(y_aff) + base.rel.q_aff.value() * values_of(grad_s);
        out.affine_normal_residual = rel_vec_diff(values_of(y_aff_star), transport);
    }

    // Gradient identity between the second and third fundamental forms,
    // exercised with f = q_aff: grad_II(f, x) + grad_III(f, xi) = 0.
    {
        const VectorJet a = beltrami1(base.euclid.h, base.rel.q_aff, base.euclid.dx);
        const VectorJet b = beltrami1(base.euclid.e, base.rel.q_aff, dxi);
        out.beltrami_swap_residual = rel_vec_diff(values_of(a), -values_of(b));
    }

    auto& rc = out.records;
    add_record(rc, "affine_support_transport", "q*_aff = |A|^(-1/(n+2)) q_aff", out.q_aff_residual,
               tol.transport);
    if (out.phi_residual >= 0.0) {
        add_record(rc, "tcheby_function_transport", "phi* = |A|^(1/(2n)) phi", out.phi_residual,
                   tol.transport);
    } else {
        add_skipped(rc, "tcheby_function_transport", "phi* = |A|^(1/(2n)) phi",
                    "Tchebychev function undefined (q/q_aff <= 0)");
    }
    add_record(rc, "tcheby_vector_transport", "T* = T - (q/2n) grad_III(ln|A|, xi)",
               out.tcheby_residual, tol.transport);
    add_record(rc, "laplace_transport", "L* = L - (q/2n) grad_III(ln|A|, xi)",
               out.laplace_residual, tol.transport);
    add_record(rc, "affine_normal_transport",
               "y*_aff = |A|^(-1/(n+2)) y_aff + q_aff grad_III(|A|^(-1/(n+2)), xi)",
               out.affine_normal_residual, tol.transport);
    add_record(rc, "beltrami_swap", "grad_II(f, x) = -grad_III(f, xi)", out.beltrami_swap_residual,
               tol.identity);
    return out;
}

ParallelismResult affine_parallelism_test(const ParallelConfig& cfg,
                                          const std::vector<std::vector<double>>& points,
                                          int order) {
    if (points.size() < 2) throw Error("the parallelism predicate needs at least two sample points");
    ParallelismResult out;
    const int n = cfg.surface.n;

    std::vector<double> As;
    std::vector<FrameBundle> bases;
    for (const auto& p : points) {
        bases.push_back(build_frames(cfg.surface, cfg.normalization, p, order));
        const CurvatureData curv = principal_curvatures(bases.back().rel);
        As.push_back(family_determinant(bases.back().rel, curv, cfg.mu).det_route);
    }

    double mean = 0.0;
    for (double a : As) mean += a;
    mean /= static_cast<double>(As.size());
    double var = 0.0, mean_abs = 0.0, max_dev = 0.0;
    for (double a : As) {
        var += (a - mean) * (a - mean);
        mean_abs += std::abs(a);
        max_dev = std::max(max_dev, std::abs(a - mean));
    }
    var /= static_cast<double>(As.size());
    mean_abs /= static_cast<double>(As.size());

    out.mean_A = mean;
    out.A_spread = std::sqrt(var) / mean_abs;
    out.linear_relation_residual = max_dev / std::abs(cfg.mu);
    out.parallel = out.A_spread <= 1e-6;

    if (out.parallel) {
        double c_sum = 0.0, gauss_worst = 0.0, vec_worst = 0.0;
        for (const FrameBundle& base : bases) {
            const FrameBundle star = offset_frames(base, cfg.mu);
            const VectorJet y_aff = relative_normal(base.rel.q_aff, base.euclid);
            const VectorJet y_aff_star = relative_normal(star.rel.q_aff, star.euclid);
            const Eigen::VectorXd yv = values_of(y_aff), sv = values_of(y_aff_star);
            c_sum += yv.dot(sv) / yv.squaredNorm();
            gauss_worst = std::max(
                gauss_worst, rel_diff(star.euclid.Ktilde.value() / base.euclid.Ktilde.value(),
                                      1.0 / mean));
            vec_worst = std::max(vec_worst, rel_vec_diff(values_of(star.rel.T_ambient),
                                                         values_of(base.rel.T_ambient)));
            vec_worst = std::max(vec_worst, rel_vec_diff(values_of(star.rel.laplace),
                                                         values_of(base.rel.laplace)));
        }
        out.c = c_sum / static_cast<double>(bases.size());
        out.gauss_ratio_residual = gauss_worst;
        out.vector_coincide_residual = vec_worst;
        out.c_scaling_residual = rel_diff(*out.c, std::pow(std::abs(mean), -1.0 / (n + 2)));
    }
    return out;
}

double hn1_vanishing_distance(const CurvatureData& curv) {
    if (std::abs(curv.K) < 1e-10)
        throw NotApplicable("relative curvature is numerically zero");
    for (const auto& r : curv.R)
        if (!r) throw NotApplicable("a relative radius of curvature is undefined");
    return curv.H[curv.n - 1] / curv.K;
}

}  // namespace relgeo
