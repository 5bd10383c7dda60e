#include "relgeo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "relgeo/errors.hpp"

namespace relgeo {

JetMat JetMat::identity(int n, const Jet& proto) {
    JetMat m(n, proto);
    for (int i = 0; i < n; ++i) m(i, i) = proto.like(1.0);
    return m;
}

JetMat JetMat::truncated(int new_order) const {
    JetMat out = *this;
    for (Jet& j : out.a_) j = j.truncated(new_order);
    return out;
}

Eigen::MatrixXd JetMat::values() const {
    Eigen::MatrixXd m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).value();
    return m;
}

double JetMat::value_norm() const {
    double s = 0.0;
    for (const Jet& j : a_) s += j.value() * j.value();
    return std::sqrt(s);
}

JetMat& JetMat::operator+=(const JetMat& rhs) {
    if (n_ != rhs.n_) throw Error("jet matrix size mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
    return *this;
}

JetMat& JetMat::operator-=(const JetMat& rhs) {
    if (n_ != rhs.n_) throw Error("jet matrix size mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= rhs.a_[i];
    return *this;
}

JetMat operator+(const JetMat& a, const JetMat& b) {
    JetMat r = a;
    r += b;
    return r;
}

JetMat operator-(const JetMat& a, const JetMat& b) {
    JetMat r = a;
    r -= b;
    return r;
}

JetMat operator*(const JetMat& a, const JetMat& b) {
    if (a.n_ != b.n_) throw Error("jet matrix size mismatch");
    const int n = a.n_;
    JetMat r(n, a.a_[0]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet s = a(i, 0) * b(0, j);
            for (int k = 1; k < n; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

JetMat operator*(const Jet& s, const JetMat& m) {
    JetMat r = m;
    for (Jet& j : r.a_) j = s * j;
    return r;
}

JetMat operator*(double s, const JetMat& m) {
    JetMat r = m;
    for (Jet& j : r.a_) j *= s;
    return r;
}

JetMat transpose(const JetMat& m) {
    JetMat r = m;
    for (int i = 0; i < m.n(); ++i)
        for (int j = 0; j < i; ++j) std::swap(r(i, j), r(j, i));
    return r;
}

namespace {

Jet det_recursive(const JetMat& m, std::vector<int>& rows, std::vector<int>& cols) {
    const int n = static_cast<int>(rows.size());
    if (n == 1) return m(rows[0], cols[0]);
    if (n == 2)
        return m(rows[0], cols[0]) * m(rows[1], cols[1]) - m(rows[0], cols[1]) * m(rows[1], cols[0]);
    Jet acc = m(0, 0).like(0.0);
    const int row0 = rows[0];
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    for (int c = 0; c < n; ++c) {
        std::vector<int> sub_cols;
        sub_cols.reserve(n - 1);
        for (int j = 0; j < n; ++j)
            if (j != c) sub_cols.push_back(cols[j]);
        Jet term = m(row0, cols[c]) * det_recursive(m, sub_rows, sub_cols);
        if (c % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    return acc;
}

}  // namespace

Jet det(const JetMat& m) {
    std::vector<int> idx(m.n());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> idx2 = idx;
    return det_recursive(m, idx, idx2);
}

JetMat inverse(const JetMat& m) {
    const int n = m.n();
    const Jet d = det(m);
    const double scale = std::pow(1.0 + m.value_norm(), n);
    if (std::abs(d.value()) < 1e-13 * scale) throw SingularForm("jet matrix is singular (value part)");
    JetMat adj(n, m(0, 0));
    if (n == 1) {
        adj(0, 0) = m(0, 0).like(1.0);
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::vector<int> rows, cols;
                for (int r = 0; r < n; ++r)
                    if (r != i) rows.push_back(r);
                for (int c = 0; c < n; ++c)
                    if (c != j) cols.push_back(c);
                Jet cof = det_recursive(m, rows, cols);
                adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
            }
    }
    JetMat out(n, m(0, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = adj(i, j) / d;
    return out;
}

double symmetry_defect(const JetMat& m) {
    const Eigen::MatrixXd v = m.values();
    return (v - v.transpose()).norm() / (1.0 + v.norm());
}

RealEigenSystem real_eigensystem(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw Error("eigen decomposition failed to converge");
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();
    const int n = static_cast<int>(m.rows());

    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(values[i]));
    const double imag_tol = 1e-8 * (scale > 0.0 ? scale : 1.0);
    for (int i = 0; i < n; ++i)
        if (std::abs(values[i].imag()) > imag_tol)
            throw ComplexEigenvalues("shape operator spectrum is not real at this point");

    // Strip complex phases: rotate each column so its largest entry is real.
    Eigen::MatrixXd real_vecs(n, n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXcd col = vectors.col(i);
        int imax = 0;
        for (int r = 1; r < n; ++r)
            if (std::abs(col[r]) > std::abs(col[imax])) imax = r;
        std::complex<double> phase = col[imax] / std::abs(col[imax]);
        col /= phase;
        for (int r = 0; r < n; ++r) real_vecs(r, i) = col[r].real();
        real_vecs.col(i).normalize();
    }

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int a, int b) { return values[a].real() < values[b].real(); });

    RealEigenSystem out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        out.eigenvalues[i] = values[perm[i]].real();
        out.eigenvectors.col(i) = real_vecs.col(perm[i]);
        int imax = 0;
        for (int r = 1; r < n; ++r)
            if (std::abs(out.eigenvectors(r, i)) > std::abs(out.eigenvectors(imax, i))) imax = r;
        if (out.eigenvectors(imax, i) < 0.0) out.eigenvectors.col(i) *= -1.0;
    }
    return out;
}

double rel_diff(double a, double b) {
    return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).norm() / (1.0 + std::max(a.norm(), b.norm()));
}

double rel_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error("rel_diff length mismatch");
    double num = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return std::sqrt(num) / (1.0 + std::sqrt(std::max(na, nb)));
}

}  // namespace relgeo
