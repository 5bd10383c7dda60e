#include "relgeo/relative.hpp"

#include <algorithm>
#include <cmath>

#include "relgeo/errors.hpp"

namespace relgeo {

namespace {

Jet aligned(const Jet& j, int order) {
    return j.order() == order ? j : j.truncated(order);
}

VectorJet aligned(const VectorJet& v, int order) {
    return v.order() == order ? v : v.truncated(order);
}

JetMat aligned(const JetMat& m, int order) {
    return m.order() == order ? m : m.truncated(order);
}

}  // namespace

Jet support_function(const NormalizationDef& nd, const EuclidFrame& frame) {
    Jet q;
    switch (nd.kind) {
        case NormalizationDef::Kind::Euclidean:
            q = frame.xi[0].like(1.0);
            break;
        case NormalizationDef::Kind::Equiaffine:
            q = pow(abs(frame.Ktilde), 1.0 / (frame.n + 2));
            break;
        case NormalizationDef::Kind::Custom:
            if (!nd.expr) throw Error("custom normalization without an expression");
            q = eval_jet(*nd.expr, frame.point, frame.x.order() - 1);
            break;
    }
    if (std::abs(q.value()) < 1e-10)
        throw ZeroSupport("support function vanishes at this point");
    return q;
}

VectorJet relative_normal(const Jet& q, const EuclidFrame& frame) {
    if (std::abs(q.value()) < 1e-10) throw RankViolation("support function vanishes; not a normalization");
    const int m = frame.x.order();
    if (q.is_constant()) {
        // Gradient term vanishes identically; keep the full order of xi.
        return q.value() * frame.xi;
    }
    const int t = std::min({frame.h_inv.order(), q.order() - 1, m - 1});
    VectorJet y = VectorJet::zero(frame.n + 1, frame.xi[0].truncated(t));
    for (int i = 0; i < frame.n; ++i) {
        const Jet dq_i = aligned(q.derivative(i), t);
        for (int j = 0; j < frame.n; ++j)
            y -= (aligned(frame.h_inv(i, j), t) * dq_i) * aligned(frame.dx[j], t);
    }
    y += aligned(q, t) * aligned(frame.xi, t);

    // <xi, y> = q must hold by construction.
    const Jet qy = dot(aligned(frame.xi, t), y);
    if (std::abs(qy.value() - q.value()) > 1e-9 * (1.0 + std::abs(q.value())))
        throw RankViolation("relative normal does not reproduce its support function");
    return y;
}

VectorJet beltrami1(const JetMat& form, const Jet& f, const std::vector<VectorJet>& dtarget) {
    const int n = form.n();
    if (static_cast<int>(dtarget.size()) != n) throw Error("beltrami1: target derivative count mismatch");
    const JetMat form_inv = inverse(form);  // throws SingularForm
    const int t = std::min({form_inv.order(), f.order() - 1, dtarget[0].order()});
    VectorJet out = VectorJet::zero(dtarget[0].dim(), dtarget[0][0].truncated(t));
    for (int i = 0; i < n; ++i) {
        const Jet df_i = aligned(f.derivative(i), t);
        for (int j = 0; j < n; ++j) out += (aligned(form_inv(i, j), t) * df_i) * aligned(dtarget[j], t);
    }
    return out;
}

namespace {

RelativeFrame build_relative_core(const EuclidFrame& frame, Jet q, VectorJet y) {
    RelativeFrame rel;
    const int n = frame.n;
    rel.n = n;
    rel.q = std::move(q);
    rel.y = std::move(y);
    rel.q_aff = pow(abs(frame.Ktilde), 1.0 / (n + 2));

    const int m = frame.x.order();
    {
        const int t = std::min(m - 1, rel.q.order());
        rel.X = (1.0 / aligned(rel.q, t)) * aligned(frame.xi, t);
    }

    // Relative metric G = q^(-1) h.
    {
        const int t = std::min(frame.h.order(), rel.q.order());
        const Jet q_inv = 1.0 / aligned(rel.q, t);
        rel.G = JetMat(n, q_inv);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rel.G(i, j) = q_inv * aligned(frame.h(i, j), t);
        rel.G_inv = inverse(rel.G);
    }

    // Mixed shape tensor from d_i y = -B_i^j d_j x, solved against the
    // tangent basis; the normal component must vanish (tangency of d_i y).
    {
        const int tb = rel.y.order() - 1;
        rel.B_mix = JetMat(n, rel.y[0].truncated(tb));
        const JetMat g_inv_low = aligned(frame.g_inv, tb);
        const VectorJet xi_low = aligned(frame.xi, tb);
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            rel.dy.push_back(rel.y.derivative(i));
            const VectorJet& dyi = rel.dy.back();
            const double defect = std::abs(dot(dyi, xi_low).value()) / (1.0 + dyi.value_norm());
            worst = std::max(worst, defect);
            for (int j = 0; j < n; ++j) {
                Jet b = dyi[0].like(0.0);
                for (int k = 0; k < n; ++k)
                    b -= dot(dyi, aligned(frame.dx[k], tb)) * g_inv_low(k, j);
                rel.B_mix(i, j) = b;
            }
        }
        rel.b_normal_residual = worst;
        if (worst > 1e-8)
            throw RankViolation("derivatives of the relative normal are not tangent");
        const int tc = std::min(rel.B_mix.order(), rel.G.order());
        rel.B_cov = aligned(rel.B_mix, tc) * aligned(rel.G, tc);
        rel.b_symmetry_residual = symmetry_defect(rel.B_cov);
        if (rel.b_symmetry_residual > 1e-6)
            throw NonSymmetricB("covariant shape tensor lost its symmetry (pipeline bug)");
    }

    // Levi-Civita symbols of G.
    const int tg = rel.G.order() - 1;
    {
        const JetMat ginv_low = aligned(rel.G_inv, tg);
        std::vector<JetMat> dG;
        dG.reserve(n);
        for (int k = 0; k < n; ++k) {
            JetMat d(n, ginv_low(0, 0));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) d(i, j) = rel.G(i, j).derivative(k);
            dG.push_back(std::move(d));
        }
        for (int mm = 0; mm < n; ++mm) {
            JetMat gam(n, ginv_low(0, 0));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Jet s = ginv_low(0, 0).like(0.0);
                    for (int k = 0; k < n; ++k)
                        s += ginv_low(mm, k) * (dG[i](j, k) + dG[j](i, k) - dG[k](i, j));
                    gam(i, j) = 0.5 * s;
                }
            rel.Gamma.push_back(std::move(gam));
        }
    }

    // Darboux tensor. The tangential terms reduce against <X, d_m x> = 0 and
    // <X, d_a d_b x> = G_ab, leaving
    //   A_ijk = <X, d_k d_j d_i x> - Γ^m_ij G_mk - Γ^m_ki G_mj - Γ^m_kj G_mi.
    const int ta = std::min({m - 3, tg, rel.X.order() - 0});
    {
        if (ta < 0) throw OrderExceeded("Darboux tensor needs third derivatives of the immersion");
        const VectorJet X_low = aligned(rel.X, ta);
        const JetMat G_low = aligned(rel.G, ta);
        std::vector<JetMat> Gam_low;
        for (const JetMat& gm : rel.Gamma) Gam_low.push_back(aligned(gm, ta));
        rel.darboux.assign(static_cast<std::size_t>(n) * n * n, X_low[0].like(0.0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j)
                for (int k = 0; k <= j; ++k) {
                    const VectorJet dddx = frame.dx[i].derivative(j).derivative(k);
                    Jet a = dot(X_low, aligned(dddx, ta));
                    for (int mm = 0; mm < n; ++mm) {
                        a -= Gam_low[mm](i, j) * G_low(mm, k);
                        a -= Gam_low[mm](k, i) * G_low(mm, j);
                        a -= Gam_low[mm](k, j) * G_low(mm, i);
                    }
                    // Total symmetry: store once per permutation class.
                    const int idx[3] = {i, j, k};
                    int p[3];
                    std::copy(idx, idx + 3, p);
                    std::sort(p, p + 3);
                    do {
                        rel.darboux[static_cast<std::size_t>(p[0]) * n * n + p[1] * n + p[2]] = a;
                    } while (std::next_permutation(p, p + 3));
                }
    }

    // Tchebychev vector, trace route: T^m = (1/n) G^(ia) G^(mb) A_iab.
    {
        const JetMat ginv_low = aligned(rel.G_inv, ta);
        for (int mm = 0; mm < n; ++mm) {
            Jet t = ginv_low(0, 0).like(0.0);
            for (int i = 0; i < n; ++i)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        t += ginv_low(i, a) * ginv_low(mm, b) *
                             rel.darboux[static_cast<std::size_t>(i) * n * n + a * n + b];
            rel.T.push_back(t / static_cast<double>(n));
        }
        rel.T_ambient = VectorJet::zero(n + 1, rel.T[0]);
        for (int mm = 0; mm < n; ++mm) rel.T_ambient += rel.T[mm] * aligned(frame.dx[mm], ta);
    }

    // Pick invariant J = A_jkl A^(jkl) / (n (n-1)), value level.
    {
        const Eigen::MatrixXd gi = rel.G_inv.values();
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double raised = 0.0;
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b)
                            for (int c = 0; c < n; ++c)
                                raised += gi(j, a) * gi(k, b) * gi(l, c) *
                                          rel.darboux[static_cast<std::size_t>(a) * n * n + b * n + c].value();
                    s += raised * rel.darboux[static_cast<std::size_t>(j) * n * n + k * n + l].value();
                }
        rel.pick_invariant = s / (n * (n - 1));
    }

    // Tchebychev function phi = (q / q_aff)^((n+2)/(2n)).
    {
        const int t = std::min(rel.q.order(), rel.q_aff.order());
        const Jet ratio = aligned(rel.q, t) / aligned(rel.q_aff, t);
        if (ratio.value() > 0.0) {
            rel.phi = pow(ratio, (n + 2) / (2.0 * n));
            rel.phi_defined = true;
        }
    }

    // Laplace vector, both routes.
    {
        const int t = std::min(m - 2, tg);
        VectorJet lap = VectorJet::zero(n + 1, frame.x[0].truncated(t));
        const JetMat ginv_low = aligned(rel.G_inv, t);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                VectorJet hess = aligned(frame.dx[i].derivative(j), t);
                for (int mm = 0; mm < n; ++mm)
                    hess -= aligned(rel.Gamma[mm](i, j), t) * aligned(frame.dx[mm], t);
                lap += ginv_low(i, j) * hess;
            }
        rel.laplace = (1.0 / n) * lap;
        const int t2 = std::min(rel.T_ambient.order(), rel.y.order());
        rel.laplace_decomposed = aligned(rel.T_ambient, t2) + aligned(rel.y, t2);
        double num = 0.0;
        for (int c = 0; c <= n; ++c) {
            const double d = rel.laplace[c].value() - rel.laplace_decomposed[c].value();
            num += d * d;
        }
        rel.laplace_residual =
            std::sqrt(num) / (1.0 + std::max(rel.laplace.value_norm(), rel.laplace_decomposed.value_norm()));
    }

    return rel;
}

}  // namespace

RelativeFrame build_relative_frame(const EuclidFrame& frame, const NormalizationDef& nd) {
    Jet q = support_function(nd, frame);
    VectorJet y = relative_normal(q, frame);
    RelativeFrame rel = build_relative_core(frame, std::move(q), std::move(y));
    if (rel.phi_defined) {
        const std::vector<Jet> grad = tchebychev_gradient(frame, rel);
        double num = 0.0, scale = 0.0;
        for (int mm = 0; mm < rel.n; ++mm) {
            const double d = grad[mm].value() - rel.T[mm].value();
            num += d * d;
            scale = std::max(scale, std::abs(rel.T[mm].value()));
        }
        rel.tcheby_route_residual = std::sqrt(num) / (1.0 + scale);
    }
    return rel;
}

RelativeFrame build_relative_frame_with_normal(const EuclidFrame& frame, const VectorJet& y) {
    const int t = std::min(frame.xi.order(), y.order());
    Jet q = dot(aligned(frame.xi, t), aligned(y, t));
    if (std::abs(q.value()) < 1e-10) throw ZeroSupport("support function vanishes at this point");
    RelativeFrame rel = build_relative_core(frame, std::move(q), aligned(y, std::min(y.order(), frame.x.order())));
    if (rel.phi_defined) {
        const std::vector<Jet> grad = tchebychev_gradient(frame, rel);
        double num = 0.0, scale = 0.0;
        for (int mm = 0; mm < rel.n; ++mm) {
            const double d = grad[mm].value() - rel.T[mm].value();
            num += d * d;
            scale = std::max(scale, std::abs(rel.T[mm].value()));
        }
        rel.tcheby_route_residual = std::sqrt(num) / (1.0 + scale);
    }
    return rel;
}

std::vector<Jet> tchebychev_gradient(const EuclidFrame& frame, const RelativeFrame& rel) {
    if (!rel.phi_defined) throw DomainError("Tchebychev function is undefined (q/q_aff <= 0)");
    const Jet ln_phi = log(rel.phi);
    const int t = std::min(rel.G_inv.order(), ln_phi.order() - 1);
    const int n = rel.n;

    std::vector<Jet> components;
    const JetMat ginv_low = aligned(rel.G_inv, t);
    for (int i = 0; i < n; ++i) {
        Jet s = ginv_low(0, 0).like(0.0);
        for (int j = 0; j < n; ++j) s += ginv_low(i, j) * aligned(ln_phi.derivative(j), t);
        components.push_back(s);
    }

    // Second route: q * h^(ij) d_i ln(phi) d_j x, compared componentwise in
    // the chart basis via q h^(ij).
    double worst = 0.0;
    const JetMat hinv_low = aligned(frame.h_inv, t);
    const Jet q_low = aligned(rel.q, t);
    for (int i = 0; i < n; ++i) {
        Jet s = hinv_low(0, 0).like(0.0);
        for (int j = 0; j < n; ++j) s += q_low * hinv_low(i, j) * aligned(ln_phi.derivative(j), t);
        worst = std::max(worst, std::abs(s.value() - components[i].value()) /
                                    (1.0 + std::abs(components[i].value())));
    }
    if (worst > 1e-8) throw Error("Tchebychev gradient expressions disagree; frame is inconsistent");
    return components;
}

ImageForms relative_image_forms(const EuclidFrame& frame, const RelativeFrame& rel) {
    ImageForms out;
    const int n = frame.n;

    const int tc = std::min(rel.B_mix.order(), frame.g.order());
    const JetMat B_low = aligned(rel.B_mix, tc);
    out.g_bar_contracted = B_low * aligned(frame.g, tc) * transpose(B_low);
    out.h_bar_contracted = -1.0 * (aligned(rel.B_mix, std::min(rel.B_mix.order(), frame.h.order())) *
                                   aligned(frame.h, std::min(rel.B_mix.order(), frame.h.order())));

    const int td = rel.dy[0].order();
    out.g_bar_direct = JetMat(n, rel.dy[0][0]);
    out.h_bar_direct = JetMat(n, rel.dy[0][0].truncated(std::max(td - 1, 0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out.g_bar_direct(i, j) = dot(rel.dy[i], rel.dy[j]);
            out.h_bar_direct(i, j) =
                dot(aligned(rel.dy[i].derivative(j), td - 1), aligned(frame.xi, td - 1));
        }

    out.g_residual = rel_diff(out.g_bar_contracted.values(), out.g_bar_direct.values());
    out.h_residual = rel_diff(out.h_bar_contracted.values(), out.h_bar_direct.values());

    const Eigen::MatrixXd scaled = -rel.q.value() * rel.B_cov.values();
    out.form_scale_residual = rel_diff(out.h_bar_direct.values(), scaled);

    out.Kbar = gauss_curvature_of_map(rel.y, frame.point, frame.xi.values());
    const double parity = (n % 2 == 0) ? 1.0 : -1.0;
    out.K_from_quotient = parity * frame.Ktilde.value() / out.Kbar.value();
    out.K_residual = rel_diff(out.K_from_quotient, rel.B_mix.values().determinant());
    return out;
}

int recommended_order(const NormalizationDef& nd) {
    // The deepest consumer is the from-scratch affine apparatus of an offset
    // hypersurface; an equiaffine base support eats one extra derivative of x
    // before the offset map is even formed.
    return nd.kind == NormalizationDef::Kind::Equiaffine ? 6 : 5;
}

}  // namespace relgeo
