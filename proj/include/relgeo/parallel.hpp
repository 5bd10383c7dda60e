#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relgeo/curvature.hpp"

namespace relgeo {

// Base hypersurface plus normalization plus relative distance.
struct ParallelConfig {
    SurfaceDef surface;
    NormalizationDef normalization;
    double mu = 0.0;
};

// Euclidean and relative frames of one hypersurface at one point.
struct FrameBundle {
    EuclidFrame euclid;
    RelativeFrame rel;
};

FrameBundle build_frames(const SurfaceDef& s, const NormalizationDef& nd,
                         std::span<const double> p, int order);

// Offset hypersurface x + mu y at the same chart point, sharing the base
// normalization y. Everything is recomputed from scratch on the offset map;
// the transformation laws downstream are treated purely as assertions.
// Throws SingularFamily when |det(I - mu B)| < 1e-10.
FrameBundle offset_frames(const FrameBundle& base, double mu);

// det(I - mu B) along three independent routes (plus the radii form when all
// radii exist): the literal determinant, the mean-curvature polynomial, and
// the eigenvalue product.
struct FamilyDeterminant {
    double det_route = 0.0;
    double poly_route = 0.0;
    double eigen_route = 0.0;
    std::optional<double> radii_route;
    double max_disagreement = 0.0;
};
FamilyDeterminant family_determinant(const RelativeFrame& rel, const CurvatureData& curv, double mu);

// det(I - mu B) as a jet, for derivatives of ln|A|.
Jet family_determinant_jet(const RelativeFrame& rel, double mu);

struct IdentityRecord {
    std::string id;
    std::string formula;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string not_applicable;  // nonempty reason when the check is skipped

    bool applicable() const { return not_applicable.empty(); }
};

struct VerifyTolerances {
    double identity = 1e-6;
    double routes = 1e-8;      // determinant-route agreement
    double transport = 1e-6;   // affine transport vs from-scratch offset values
    double normal = 1e-9;      // shared unit normal
    double derivative = 1e-6;  // shape derivative law
};

struct IdentityReport {
    double mu = 0.0;
    double A = 0.0;
    double Kstar = 0.0;
    std::vector<double> k_star;
    std::vector<double> H_star;
    std::vector<IdentityRecord> records;

    bool all_pass() const;
    const IdentityRecord* find(const std::string& id) const;
};

// Evaluates every transformation law between the base and the offset at mu:
// shared data (normal, support, conormal, covariant shape, relative image),
// form offsets, mixed-shape relations, curvature maps, mean-curvature
// transforms, and the Gaussian-curvature ratios.
IdentityReport verify_transform(const FrameBundle& base, double mu,
                                const VerifyTolerances& tol = {});

// Central-difference check of d(omega*)/dmu = (omega*)^2 in the fixed chart
// basis; the residual decays as O(delta^2).
double derivative_check(const FrameBundle& base, double mu, double delta);

// Affine apparatus of the offset: each starred quantity by the transport
// formula and from scratch, with residuals.
struct AffineTransport {
    double A = 0.0;
    double q_aff_residual = 0.0;
    double phi_residual = 0.0;
    double tcheby_residual = 0.0;
    double laplace_residual = 0.0;
    double affine_normal_residual = 0.0;
    double beltrami_swap_residual = 0.0;  // second-form vs third-form gradient identity
    std::vector<IdentityRecord> records;
};
AffineTransport affine_transport(const FrameBundle& base, const FrameBundle& star, double mu,
                                 const VerifyTolerances& tol = {});

// Are the affine normals of the base and of the offset parallel at every
// sampled point? True iff A is constant across the sample; then the
// proportionality factor c and the cross-checks of the equivalent conditions
// are reported.
struct ParallelismResult {
    bool parallel = false;
    std::optional<double> c;
    double mean_A = 0.0;
    double A_spread = 0.0;                  // stddev(A) / mean |A|
    double linear_relation_residual = 0.0;  // max |A - mean A| / |mu|
    double gauss_ratio_residual = 0.0;      // Ktilde*/Ktilde vs 1/A
    double vector_coincide_residual = 0.0;  // T* vs T and L* vs L
    double c_scaling_residual = 0.0;        // c vs |A|^(-1/(n+2))
};
ParallelismResult affine_parallelism_test(const ParallelConfig& cfg,
                                          const std::vector<std::vector<double>>& points,
                                          int order);

// Relative distance at which the offset's (n-1)-th mean curvature vanishes:
// c = H_{n-1} / K. Throws NotApplicable when K ~ 0 or a radius is undefined.
double hn1_vanishing_distance(const CurvatureData& curv);

}  // namespace relgeo
