#pragma once

#include <optional>
#include <span>
#include <vector>

#include "relgeo/relative.hpp"

namespace relgeo {

// Eigenstructure of the relative shape operator at a point.
struct CurvatureData {
    int n = 0;
    std::vector<double> k;                     // relative principal curvatures, ascending
    std::vector<std::vector<double>> U;        // chart components of the principal vectors
    std::vector<double> H;                     // H[0..n], H[0] = 1, H[n] = K
    double K = 0.0;
    std::vector<std::optional<double>> R;      // radii 1/k_i where |k_i| > 1e-10
    std::vector<double> charpoly;              // P(k) = sum_j charpoly[j] k^j
    double eig_residual = 0.0;                 // max |omega(u_i) - k_i u_i|
    double b_orthogonality_residual = 0.0;     // B(u_r, u_s) across distinct eigenvalues
    double trace_residual = 0.0;               // n H_1 vs trace
    double det_residual = 0.0;                 // H_n vs det
};

// Eigenvalues/vectors of the mixed shape tensor (a general real matrix; the
// relative metric may be indefinite, so no symmetric solver is used). Vectors
// have unit G-length when G is definite, unit chart length otherwise.
CurvatureData principal_curvatures(const RelativeFrame& rel);

// Binomially averaged elementary symmetric functions H_0..H_n of the k_i.
std::vector<double> mean_curvatures(std::span<const double> k);

// Coefficients of sum_r C(n,r) H_r (-k)^(n-r), ascending powers of k.
std::vector<double> charpoly_coeffs(std::span<const double> H);

double binomial(int n, int r);

}  // namespace relgeo
