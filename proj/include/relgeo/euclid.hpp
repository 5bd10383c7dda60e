#pragma once

#include <span>
#include <vector>

#include "relgeo/linalg.hpp"
#include "relgeo/surface.hpp"

namespace relgeo {

// Per-point Euclidean apparatus of an immersion, all fields jets. Orders
// decay with each differentiation: for x of order m, dx and xi carry m-1,
// the fundamental forms and the Gaussian curvature carry m-2.
struct EuclidFrame {
    int n = 0;
    std::vector<double> point;
    VectorJet x;
    std::vector<VectorJet> dx;   // d_i x
    VectorJet cross_raw;         // d_1 x X ... X d_n x, unnormalized, unoriented
    double normal_sign = 1.0;    // sign applied to cross_raw for xi
    VectorJet xi;                // unit normal
    JetMat g, g_inv;             // first fundamental form <d_i x, d_j x>
    JetMat h, h_inv;             // second fundamental form <d_j d_i x, xi>
    JetMat e, e_inv;             // third fundamental form <d_i xi, d_j xi>
    Jet Ktilde;                  // det(h) / det(g)
};

// Frame of a surface chart. Requires order >= 2 and p inside the domain.
EuclidFrame build_euclid_frame(const SurfaceDef& s, std::span<const double> p, int order);

// Frame of an already-evaluated map. When orient_ref is nonempty the normal
// is flipped, if needed, to have positive scalar product with it.
EuclidFrame build_euclid_frame_from_jets(const VectorJet& x, std::span<const double> point,
                                         std::span<const double> orient_ref = {});

// Mixed shape operator S_i^j = h_ik g^(kj); verifies the Weingarten relation
// d_j xi + h_jk g^(km) d_m x = 0 at the value level before returning.
JetMat euclid_shape(const EuclidFrame& frame);

// Gaussian curvature of an arbitrary vector-jet map (e.g. a relative image),
// oriented against the reference normal.
Jet gauss_curvature_of_map(const VectorJet& map, std::span<const double> point,
                           std::span<const double> orient_ref);

// Sign of the shape operator trace per unit eigenvalue; +1 or -1 on a
// sphere-like chart. Convenience for orientation-aware expectations.
double shape_orientation_sign(const EuclidFrame& frame);

}  // namespace relgeo
