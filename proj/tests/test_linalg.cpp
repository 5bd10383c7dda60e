#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "relgeo/linalg.hpp"
#include "support/random_gen.hpp"

using namespace relgeo;
using relgeo::testing::Rng;
using relgeo::testing::random_jet;

namespace {

JetMat random_matrix(Rng& rng, int n, int n_vars, int order) {
    JetMat m(n, Jet::constant(0.0, n_vars, order));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = random_jet(rng, n_vars, order);
    for (int i = 0; i < n; ++i) m(i, i) += 3.0;  // keep it comfortably invertible
    return m;
}

}  // namespace

TEST_CASE("jet determinant matches the numeric determinant on values") {
    Rng rng(3);
    for (int n = 1; n <= 4; ++n) {
        const JetMat m = random_matrix(rng, n, 2, 3);
        CHECK(det(m).value() == doctest::Approx(m.values().determinant()).epsilon(1e-11));
    }
}

TEST_CASE("jet determinant differentiates correctly") {
    // det [[u, 1], [1, u]] = u^2 - 1.
    const Jet u = Jet::variable(0.7, 0, 1, 3);
    JetMat m(2, u.like(0.0));
    m(0, 0) = u;
    m(0, 1) = u.like(1.0);
    m(1, 0) = u.like(1.0);
    m(1, 1) = u;
    const Jet d = det(m);
    CHECK(d.value() == doctest::Approx(0.7 * 0.7 - 1.0));
    CHECK(d.partial(make_multi_index({1})) == doctest::Approx(1.4));
    CHECK(d.partial(make_multi_index({2})) == doctest::Approx(2.0));
}

TEST_CASE("inverse times the matrix is the identity, jets included") {
    Rng rng(5);
    for (int n = 1; n <= 4; ++n) {
        const JetMat m = random_matrix(rng, n, 2, 3);
        const JetMat prod = m * inverse(m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Jet& p = prod(i, j);
                CHECK(p.value() == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
                for (int c = 1; c < p.layout().size(); ++c) CHECK(std::abs(p.coeff(c)) < 1e-9);
            }
    }
}

TEST_CASE("singular value parts are rejected") {
    JetMat m(2, Jet::constant(0.0, 1, 2));
    m(0, 0) = Jet::constant(1.0, 1, 2);
    m(0, 1) = Jet::constant(2.0, 1, 2);
    m(1, 0) = Jet::constant(2.0, 1, 2);
    m(1, 1) = Jet::constant(4.0, 1, 2);
    CHECK_THROWS_AS(inverse(m), SingularForm);
}

TEST_CASE("real eigensystem on a known nonsymmetric matrix") {
    Eigen::MatrixXd m(2, 2);
    m << 3.0, 1.0, 0.0, 2.0;  // eigenvalues 2 and 3
    const RealEigenSystem eig = real_eigensystem(m);
    CHECK(eig.eigenvalues[0] == doctest::Approx(2.0));
    CHECK(eig.eigenvalues[1] == doctest::Approx(3.0));
    for (int i = 0; i < 2; ++i) {
        const Eigen::VectorXd u = eig.eigenvectors.col(i);
        CHECK((m * u - eig.eigenvalues[i] * u).norm() < 1e-12);
    }
}

TEST_CASE("complex spectra are a scope boundary, not a silent answer") {
    Eigen::MatrixXd rot(2, 2);
    rot << 0.0, -1.0, 1.0, 0.0;
    CHECK_THROWS_AS(real_eigensystem(rot), ComplexEigenvalues);
}

TEST_CASE("repeated eigenvalues still give a usable basis") {
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3) * 2.5;
    const RealEigenSystem eig = real_eigensystem(id);
    for (int i = 0; i < 3; ++i) {
        CHECK(eig.eigenvalues[i] == doctest::Approx(2.5));
        CHECK(eig.eigenvectors.col(i).norm() == doctest::Approx(1.0));
    }
    CHECK(std::abs(eig.eigenvectors.determinant()) > 1e-12);
}
