#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "relgeo/euclid.hpp"
#include "support/fd.hpp"

using namespace relgeo;
namespace fd = relgeo::testing::fd;

TEST_CASE("round sphere: metric, second form, curvature") {
    const SurfaceDef s = catalog_surface("sphere", {});
    const double pts[3][2] = {{0.3, 0.7}, {-1.2, 0.4}, {2.0, -0.9}};
    for (const auto& p : pts) {
        const EuclidFrame f = build_euclid_frame(s, p, 4);
        const double c2 = std::cos(p[1]) * std::cos(p[1]);
        CHECK(f.g(0, 0).value() == doctest::Approx(c2).epsilon(1e-12));
        CHECK(f.g(1, 1).value() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(f.g(0, 1).value()) < 1e-12);
        const double sigma = shape_orientation_sign(f);
        CHECK(f.h(0, 0).value() == doctest::Approx(sigma * c2).epsilon(1e-11));
        CHECK(f.h(1, 1).value() == doctest::Approx(sigma).epsilon(1e-11));
        CHECK(f.Ktilde.value() == doctest::Approx(1.0).epsilon(1e-11));
    }
}

TEST_CASE("a plane is a flat point everywhere") {
    const SurfaceDef plane = inline_surface({"u1", "u2", "0"}, 2, {{{-1.0, 1.0}}, {{-1.0, 1.0}}});
    const double p[2] = {0.2, 0.3};
    CHECK_THROWS_AS(build_euclid_frame(plane, p, 3), FlatPoint);
}

TEST_CASE("rank-deficient charts are rejected") {
    // Both chart variables move along the same curve.
    const SurfaceDef bad = inline_surface({"u1+u2", "(u1+u2)^2", "(u1+u2)^3"}, 2,
                                          {{{-1.0, 1.0}}, {{-1.0, 1.0}}});
    const double p[2] = {0.2, 0.3};
    CHECK_THROWS_AS(build_euclid_frame(bad, p, 3), DegenerateImmersion);
}

TEST_CASE("points outside the declared domain are rejected") {
    const SurfaceDef s = catalog_surface("sphere", {});
    const double p[2] = {0.0, 1.6};  // beyond the polar margin
    CHECK_THROWS_AS(build_euclid_frame(s, p, 3), DomainError);
}

TEST_CASE("ellipsoid frame matches the finite-difference pipeline") {
    const SurfaceDef s = catalog_surface("ellipsoid", {{"a", 1.0}, {"b", 1.2}, {"c", 1.5}});
    const double p[2] = {0.3, 0.7};
    const EuclidFrame f = build_euclid_frame(s, p, 4);
    const fd::Frame o = fd::frame(fd::surface_fn(s), p);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            CHECK(std::abs(f.g(i, j).value() - o.g(i, j)) < 1e-4 * (1.0 + std::abs(o.g(i, j))));
            CHECK(std::abs(f.h(i, j).value() - o.h(i, j)) < 1e-4 * (1.0 + std::abs(o.h(i, j))));
            CHECK(std::abs(f.e(i, j).value() - o.e(i, j)) < 1e-4 * (1.0 + std::abs(o.e(i, j))));
        }
    CHECK(std::abs(f.Ktilde.value() - o.Ktilde) < 1e-4 * (1.0 + std::abs(o.Ktilde)));
}

TEST_CASE("shape operator closed forms") {
    const double p[2] = {0.4, -0.2};
    SUBCASE("unit sphere") {
        const EuclidFrame f = build_euclid_frame(catalog_surface("sphere", {}), p, 4);
        const double sigma = shape_orientation_sign(f);
        const Eigen::MatrixXd S = euclid_shape(f).values();
        CHECK((S - sigma * Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-11);
    }
    SUBCASE("sphere of radius r scales inversely") {
        const EuclidFrame f = build_euclid_frame(catalog_surface("sphere", {{"r", 2.5}}), p, 4);
        const double sigma = shape_orientation_sign(f);
        const Eigen::MatrixXd S = euclid_shape(f).values();
        CHECK((S - (sigma / 2.5) * Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-11);
    }
    SUBCASE("paraboloid at the origin is the identity with the upward normal") {
        const SurfaceDef s = catalog_surface("paraboloid", {});
        const double origin[2] = {0.0, 0.0};
        const EuclidFrame f = build_euclid_frame(s, origin, 4);
        CHECK(f.xi[2].value() == doctest::Approx(1.0));
        const Eigen::MatrixXd S = euclid_shape(f).values();
        CHECK((S - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
    }
}

TEST_CASE("spherical image of a sphere is the unit sphere") {
    const double p[2] = {0.3, 0.7};
    for (double r : {1.0, 2.0}) {
        const EuclidFrame f = build_euclid_frame(catalog_surface("sphere", {{"r", r}}), p, 4);
        const Jet k = gauss_curvature_of_map(f.xi, p, f.xi.values());
        CHECK(k.value() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("frame invariants hold to the carried jet order") {
    const std::vector<SurfaceDef> surfaces = {
        catalog_surface("sphere", {}),
        catalog_surface("ellipsoid", {}),
        catalog_surface("torus", {}),
        catalog_surface("paraboloid", {{"n", 3.0}}),
    };
    for (const SurfaceDef& s : surfaces) {
        CAPTURE(s.name);
        for (const auto& p : sample_points(s, 12, 5)) {
            const EuclidFrame f = build_euclid_frame(s, p, 4);

            // <xi, d_i x> vanishes and <xi, xi> is one, coefficientwise.
            for (int i = 0; i < f.n; ++i) {
                const Jet ortho = dot(f.xi.truncated(3), f.dx[i].truncated(3));
                for (int c = 0; c < ortho.layout().size(); ++c) CHECK(std::abs(ortho.coeff(c)) < 1e-9);
            }
            const Jet unit = dot(f.xi, f.xi);
            CHECK(unit.value() == doctest::Approx(1.0).epsilon(1e-12));
            for (int c = 1; c < unit.layout().size(); ++c) CHECK(std::abs(unit.coeff(c)) < 1e-9);

            // e = h g^(-1) h links the third form to the first two.
            const JetMat hgh = f.h * f.g_inv.truncated(f.h.order()) * f.h;
            CHECK(rel_diff(hgh.values(), f.e.values()) < 1e-9);

            // det(h)/det(g) equals det of the mixed shape operator.
            const double det_shape = euclid_shape(f).values().determinant();
            CHECK(rel_diff(f.Ktilde.value(), det_shape) < 1e-9);
        }
    }
}
