#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "relgeo/jet.hpp"

namespace relgeo {

// Dense n x n matrix over the jet ring, n <= 4. Row-major.
class JetMat {
public:
    JetMat() = default;
    JetMat(int n, const Jet& proto) : n_(n), a_(static_cast<std::size_t>(n) * n, proto.like(0.0)) {}

    static JetMat identity(int n, const Jet& proto);

    int n() const { return n_; }
    int order() const { return a_[0].order(); }
    Jet& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const Jet& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    JetMat truncated(int new_order) const;
    Eigen::MatrixXd values() const;
    double value_norm() const;  // Frobenius norm of the value part

    JetMat& operator+=(const JetMat& rhs);
    JetMat& operator-=(const JetMat& rhs);

    friend JetMat operator+(const JetMat& a, const JetMat& b);
    friend JetMat operator-(const JetMat& a, const JetMat& b);
    friend JetMat operator*(const JetMat& a, const JetMat& b);
    friend JetMat operator*(const Jet& s, const JetMat& m);
    friend JetMat operator*(double s, const JetMat& m);

private:
    int n_ = 0;
    std::vector<Jet> a_;
};

JetMat transpose(const JetMat& m);
Jet det(const JetMat& m);  // cofactor expansion, division-free

// Adjugate divided by the determinant; throws SingularForm when the value
// part of the determinant is negligible against the matrix scale.
JetMat inverse(const JetMat& m);

// Symmetry defect ||m - m^T|| / (1 + ||m||), value parts.
double symmetry_defect(const JetMat& m);

// Eigenvalues and right eigenvectors of a real matrix whose spectrum is
// expected to be real. Eigenvalues ascending, ties in solver order;
// eigenvectors are unit 2-norm columns with the largest entry positive.
// Throws ComplexEigenvalues when any |Im| > 1e-8 * spectral scale.
struct RealEigenSystem {
    std::vector<double> eigenvalues;
    Eigen::MatrixXd eigenvectors;  // column i belongs to eigenvalues[i]
};
RealEigenSystem real_eigensystem(const Eigen::MatrixXd& m);

// Relative difference of two scalars/matrices/vectors under a common scale:
// |a - b| / (1 + max(|a|, |b|)).
double rel_diff(double a, double b);
double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
double rel_diff(std::span<const double> a, std::span<const double> b);

}  // namespace relgeo
