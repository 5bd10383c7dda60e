#include "relgeo/curvature.hpp"

#include <cmath>

#include "relgeo/errors.hpp"

namespace relgeo {

double binomial(int n, int r) {
    if (r < 0 || r > n) return 0.0;
    double v = 1.0;
    for (int i = 0; i < r; ++i) v = v * (n - i) / (i + 1);
    return v;
}

CurvatureData principal_curvatures(const RelativeFrame& rel) {
    CurvatureData out;
    const int n = rel.n;
    out.n = n;

    // omega(u)^j = u^i B_i^j: the operator matrix in column convention is the
    // transpose of the stored row-indexed tensor.
    const Eigen::MatrixXd M = rel.B_mix.values();
    const Eigen::MatrixXd S = M.transpose();
    RealEigenSystem eig = real_eigensystem(S);
    out.k = eig.eigenvalues;

    // Definiteness of G decides the vector normalization.
    const Eigen::MatrixXd Gv = rel.G.values();
    const Eigen::MatrixXd Gs = 0.5 * (Gv + Gv.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ges(Gs);
    bool definite = true;
    for (int i = 0; i < n; ++i)
        if (ges.eigenvalues()[i] * ges.eigenvalues()[0] <= 0.0) definite = false;

    double kscale = 0.0;
    for (double kv : out.k) kscale = std::max(kscale, std::abs(kv));

    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd u = eig.eigenvectors.col(i);
        if (definite) {
            const double glen = std::abs(u.dot(Gs * u));
            u /= std::sqrt(glen);
        }
        out.U.emplace_back(u.data(), u.data() + n);
        const double res = (S * u - out.k[i] * u).norm() / ((1.0 + std::abs(out.k[i])) * u.norm());
        out.eig_residual = std::max(out.eig_residual, res);
    }

    // B-orthogonality of principal vectors across distinct eigenvalues.
    const Eigen::MatrixXd Bv = rel.B_cov.values();
    for (int r = 0; r < n; ++r)
        for (int s = r + 1; s < n; ++s) {
            if (std::abs(out.k[r] - out.k[s]) <= 1e-6 * (1.0 + kscale)) continue;
            Eigen::Map<const Eigen::VectorXd> ur(out.U[r].data(), n), us(out.U[s].data(), n);
            const double b = std::abs(ur.dot(Bv * us)) / ((1.0 + Bv.norm()) * ur.norm() * us.norm());
            out.b_orthogonality_residual = std::max(out.b_orthogonality_residual, b);
        }

    out.H = mean_curvatures(out.k);
    out.K = out.H[n];
    for (double kv : out.k)
        out.R.push_back(std::abs(kv) > 1e-10 ? std::optional<double>(1.0 / kv) : std::nullopt);
    out.charpoly = charpoly_coeffs(out.H);

    out.trace_residual = rel_diff(n * out.H[1], M.trace());
    out.det_residual = rel_diff(out.K, M.determinant());
    return out;
}

std::vector<double> mean_curvatures(std::span<const double> k) {
    const int n = static_cast<int>(k.size());
    if (n < 1) throw Error("mean curvatures need at least one eigenvalue");
    std::vector<double> e(n + 1, 0.0);
    e[0] = 1.0;
    for (int i = 0; i < n; ++i)
        for (int r = i + 1; r >= 1; --r) e[r] += k[i] * e[r - 1];
    std::vector<double> H(n + 1);
    for (int r = 0; r <= n; ++r) H[r] = e[r] / binomial(n, r);
    return H;
}

std::vector<double> charpoly_coeffs(std::span<const double> H) {
    const int n = static_cast<int>(H.size()) - 1;
    std::vector<double> c(n + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        c[j] = sign * binomial(n, n - j) * H[n - j];
    }
    return c;
}

}  // namespace relgeo
