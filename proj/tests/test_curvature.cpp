#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "relgeo/curvature.hpp"
#include "relgeo/parallel.hpp"
#include "support/fd.hpp"
#include "support/random_gen.hpp"

using namespace relgeo;
using relgeo::testing::Rng;
namespace fd = relgeo::testing::fd;

TEST_CASE("spheres are umbilic: k_i = sigma / r") {
    const double p[2] = {0.3, 0.7};
    for (double r : {1.0, 2.5}) {
        const FrameBundle b = build_frames(catalog_surface("sphere", {{"r", r}}),
                                           NormalizationDef::euclidean(), p, 5);
        const double sigma = shape_orientation_sign(b.euclid);
        const CurvatureData c = principal_curvatures(b.rel);
        CHECK(c.k[0] == doctest::Approx(sigma / r).epsilon(1e-11));
        CHECK(c.k[1] == doctest::Approx(sigma / r).epsilon(1e-11));
        CHECK(c.K == doctest::Approx(1.0 / (r * r)).epsilon(1e-11));
    }
}

TEST_CASE("scaling the support function scales the shape operator") {
    const double p[2] = {0.3, 0.7};
    const SurfaceDef s = catalog_surface("sphere", {});
    const FrameBundle base = build_frames(s, NormalizationDef::euclidean(), p, 5);
    const FrameBundle scaled = build_frames(s, NormalizationDef::custom("2", 2), p, 5);
    const double sigma = shape_orientation_sign(base.euclid);
    const CurvatureData c = principal_curvatures(scaled.rel);
    CHECK(c.k[0] == doctest::Approx(2.0 * sigma).epsilon(1e-11));
    CHECK(c.k[1] == doctest::Approx(2.0 * sigma).epsilon(1e-11));
    CHECK(rel_diff(scaled.rel.G.values(), Eigen::MatrixXd(0.5 * base.euclid.h.values())) < 1e-12);
}

TEST_CASE("Euclidean principal curvatures match the finite-difference shape operator") {
    const SurfaceDef s = catalog_surface("ellipsoid", {{"a", 1.0}, {"b", 1.2}, {"c", 1.5}});
    const double p[2] = {0.3, 0.7};
    const FrameBundle b = build_frames(s, NormalizationDef::euclidean(), p, 5);
    const CurvatureData c = principal_curvatures(b.rel);

    const fd::Frame o = fd::frame(fd::surface_fn(s), p);
    const RealEigenSystem fd_eig = real_eigensystem(o.shape.transpose());
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(c.k[i] - fd_eig.eigenvalues[i]) < 1e-4 * (1.0 + std::abs(c.k[i])));
}

TEST_CASE("eigen residuals and orthogonality on a non-umbilic frame") {
    const SurfaceDef s = catalog_surface("ellipsoid", {});
    for (const auto& p : sample_points(s, 10, 2)) {
        const FrameBundle b = build_frames(s, NormalizationDef::custom("1+0.1*sin(u1)", 2), p, 5);
        const CurvatureData c = principal_curvatures(b.rel);
        CHECK(c.eig_residual < 1e-7);
        CHECK(c.b_orthogonality_residual < 1e-7);
        CHECK(c.trace_residual < 1e-9);
        CHECK(c.det_residual < 1e-9);
        // omega(u_i) = k_i u_i against the stored tensor directly.
        const Eigen::MatrixXd S = b.rel.B_mix.values().transpose();
        for (int i = 0; i < 2; ++i) {
            Eigen::Map<const Eigen::VectorXd> u(c.U[i].data(), 2);
            CHECK((S * u - c.k[i] * u).norm() <= 1e-7 * (1.0 + std::abs(c.k[i])) * u.norm());
        }
    }
}

TEST_CASE("principal vectors have unit G-length when G is definite") {
    const double p[2] = {0.4, -0.3};
    const FrameBundle b =
        build_frames(catalog_surface("ellipsoid", {}), NormalizationDef::euclidean(), p, 5);
    const CurvatureData c = principal_curvatures(b.rel);
    const Eigen::MatrixXd G = b.rel.G.values();
    for (int i = 0; i < 2; ++i) {
        Eigen::Map<const Eigen::VectorXd> u(c.U[i].data(), 2);
        CHECK(std::abs(u.dot(G * u)) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("mean curvature closed forms") {
    SUBCASE("triple eigenvalue") {
        const double k[3] = {0.7, 0.7, 0.7};
        const std::vector<double> H = mean_curvatures(k);
        CHECK(H[0] == 1.0);
        CHECK(H[1] == doctest::Approx(0.7));
        CHECK(H[2] == doctest::Approx(0.49));
        CHECK(H[3] == doctest::Approx(0.343));
    }
    SUBCASE("hand arithmetic for n = 2") {
        const double k[2] = {2.0, 3.0};
        const std::vector<double> H = mean_curvatures(k);
        CHECK(H[1] == doctest::Approx(2.5));
        CHECK(H[2] == doctest::Approx(6.0));
    }
}

TEST_CASE("mean curvatures against brute-force subset enumeration") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> k(4);
        for (double& v : k) v = rng.uniform(-2.0, 2.0);
        const std::vector<double> H = mean_curvatures(k);
        for (int r = 0; r <= 4; ++r) {
            // Enumerate all C(4,r) index subsets by bitmask.
            double sum = 0.0;
            int count = 0;
            for (int mask = 0; mask < 16; ++mask) {
                if (__builtin_popcount(mask) != r) continue;
                double prod = 1.0;
                for (int i = 0; i < 4; ++i)
                    if (mask & (1 << i)) prod *= k[i];
                sum += prod;
                ++count;
            }
            CHECK(H[r] == doctest::Approx(sum / count).epsilon(1e-12));
        }
    }
}

TEST_CASE("mean curvatures are symmetric in their arguments") {
    Rng rng(31);
    std::vector<double> k = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                             rng.uniform(-1.0, 1.0)};
    const std::vector<double> H = mean_curvatures(k);
    std::vector<double> perm = {k[2], k[0], k[1]};
    const std::vector<double> H2 = mean_curvatures(perm);
    for (int r = 0; r <= 3; ++r) CHECK(H[r] == doctest::Approx(H2[r]).epsilon(1e-12));
}

TEST_CASE("characteristic polynomial from the mean curvatures") {
    SUBCASE("n = 2 expansion") {
        const double k[2] = {2.0, 3.0};
        const std::vector<double> c = charpoly_coeffs(mean_curvatures(k));
        // k^2 - 2 H_1 k + K = k^2 - 5k + 6.
        CHECK(c[2] == doctest::Approx(1.0));
        CHECK(c[1] == doctest::Approx(-5.0));
        CHECK(c[0] == doctest::Approx(6.0));
    }
    SUBCASE("eigenvalues are roots") {
        Rng rng(37);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> k(3);
            for (double& v : k) v = rng.uniform(-2.0, 2.0);
            const std::vector<double> c = charpoly_coeffs(mean_curvatures(k));
            for (double root : k) {
                double v = 0.0, pw = 1.0;
                for (double cc : c) {
                    v += cc * pw;
                    pw *= root;
                }
                CHECK(std::abs(v) < 1e-7);
            }
        }
    }
    SUBCASE("coefficients match determinant interpolation for random real-spectrum matrices") {
        Rng rng(39);
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::MatrixXd B(3, 3);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j <= i; ++j) B(i, j) = B(j, i) = rng.uniform(-1.0, 1.0);
            const RealEigenSystem eig = real_eigensystem(B);
            const std::vector<double> c = charpoly_coeffs(mean_curvatures(eig.eigenvalues));

            // Oracle: interpolate det(B - k I) at 4 nodes.
            Eigen::MatrixXd V(4, 4);
            Eigen::VectorXd rhs(4);
            for (int node = 0; node < 4; ++node) {
                const double kk = node - 1.5;
                double pw = 1.0;
                for (int j = 0; j < 4; ++j) {
                    V(node, j) = pw;
                    pw *= kk;
                }
                rhs(node) =
                    (B - kk * Eigen::MatrixXd::Identity(3, 3)).determinant();
            }
            const Eigen::VectorXd coeffs = V.fullPivLu().solve(rhs);
            // P(k) = det(B - k I), leading coefficient (-1)^n.
            for (int j = 0; j < 4; ++j)
                CHECK(c[j] == doctest::Approx(coeffs[j]).epsilon(1e-8).scale(1.0));
        }
    }
}

TEST_CASE("radii exist exactly where eigenvalues clear the threshold") {
    const double k[3] = {0.5, 1e-12, -2.0};
    std::vector<double> kv(k, k + 3);
    std::sort(kv.begin(), kv.end());
    CurvatureData c;  // exercise the rule through principal_curvatures is overkill here
    const double p[2] = {0.3, 0.7};
    const FrameBundle b =
        build_frames(catalog_surface("sphere", {}), NormalizationDef::euclidean(), p, 5);
    c = principal_curvatures(b.rel);
    for (const auto& r : c.R) {
        REQUIRE(r.has_value());
        CHECK(*r == doctest::Approx(1.0 / c.k[0]));
    }
}
