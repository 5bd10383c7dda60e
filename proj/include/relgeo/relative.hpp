#pragma once

#include <vector>

#include "relgeo/euclid.hpp"

namespace relgeo {

// Relative apparatus of a normalized hypersurface (Phi, y): support function,
// conormal, relative normal and metric, mixed/covariant shape tensors,
// Levi-Civita symbols of G, cubic Darboux tensor, Tchebychev objects, Pick
// invariant, and the Laplace vector computed along two routes.
struct RelativeFrame {
    int n = 0;
    Jet q;                    // support function <xi, y>, never zero
    Jet q_aff;                // |Ktilde|^(1/(n+2))
    VectorJet X;              // conormal q^(-1) xi
    VectorJet y;              // relative normal
    std::vector<VectorJet> dy;
    JetMat G, G_inv;          // relative metric q^(-1) h
    JetMat B_mix;             // B_i^j with d_i y = -B_i^j d_j x (row index i)
    JetMat B_cov;             // B_ij = B_i^k G_kj, symmetric
    std::vector<JetMat> Gamma;  // Gamma[m](i,j) = Levi-Civita symbol of G
    std::vector<Jet> darboux;   // A_ijk at i*n*n + j*n + k, totally symmetric
    std::vector<Jet> T;         // Tchebychev components T^m (trace route)
    VectorJet T_ambient;        // T^m d_m x
    bool phi_defined = false;   // q/q_aff must be positive for phi
    Jet phi;                    // (q/q_aff)^((n+2)/(2n))
    double pick_invariant = 0.0;
    VectorJet laplace;            // Delta^G x / n
    VectorJet laplace_decomposed; // T + y
    double laplace_residual = 0.0;
    double b_normal_residual = 0.0;    // tangency defect of d_i y
    double b_symmetry_residual = 0.0;  // symmetry defect of B_cov
    double tcheby_route_residual = 0.0;  // trace route vs gradient route
};

// Support function of the requested normalization as a jet on the frame.
Jet support_function(const NormalizationDef& nd, const EuclidFrame& frame);

// Relative normal with support q: the gradient of q on the spherical image
// plus q xi, i.e. e^(ij) d_i q d_j xi + q xi = -h^(ij) d_i q d_j x + q xi.
// The derivatives of the result are tangent by construction.
VectorJet relative_normal(const Jet& q, const EuclidFrame& frame);

// Mixed first Beltrami operator F^(ij) d_i f d_j(target) for an invertible
// symmetric form F and per-variable target derivatives.
VectorJet beltrami1(const JetMat& form, const Jet& f, const std::vector<VectorJet>& dtarget);

RelativeFrame build_relative_frame(const EuclidFrame& frame, const NormalizationDef& nd);

// Same, but the normalization is an explicit vector field (used for offset
// hypersurfaces, which share the base normalization).
RelativeFrame build_relative_frame_with_normal(const EuclidFrame& frame, const VectorJet& y);

// Tchebychev components by the gradient route T^i = G^(ij) d_j ln(phi); also
// evaluates the q-scaled second-form gradient expression and requires the two
// to agree within 1e-8. Throws DomainError when phi is undefined.
std::vector<Jet> tchebychev_gradient(const EuclidFrame& frame, const RelativeFrame& rel);

// First and second fundamental forms of the relative image (M, y), computed
// both from shape-tensor contractions and from the jets of y (with the shared
// unit normal), plus the Gaussian curvature of the image and the curvature
// quotient check.
struct ImageForms {
    JetMat g_bar_contracted, g_bar_direct;  // B g B^T  vs  <d_i y, d_j y>
    JetMat h_bar_contracted, h_bar_direct;  // -B h     vs  <d_j d_i y, xi>
    Jet Kbar;                                // Gaussian curvature of the image
    double K_from_quotient = 0.0;            // (-1)^n Ktilde / Kbar
    double g_residual = 0.0;
    double h_residual = 0.0;
    double form_scale_residual = 0.0;        // h_bar + q B_cov
    double K_residual = 0.0;                 // quotient vs det(B_mix)
};
ImageForms relative_image_forms(const EuclidFrame& frame, const RelativeFrame& rel);

// Jet order that lets every downstream consumer (including from-scratch
// offset recomputation of the affine apparatus) reach value level.
int recommended_order(const NormalizationDef& nd);

}  // namespace relgeo
