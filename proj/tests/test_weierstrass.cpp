#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <zmc/catalog.hpp>
#include <zmc/quadrature.hpp>
#include <zmc/weierstrass.hpp>

using namespace zmc;

TEST_CASE("builtin quadrature tolerance default") {
    // No environment override in this binary.
    REQUIRE(default_quad_tol() == 1e-10);
}

TEST_CASE("deformation parameters normalize and validate") {
    const DeformParams p(2.0 * pi + 0.5, 1.0, -1.0);
    CHECK(p.theta == Catch::Approx(0.5));
    CHECK_THROWS_AS(DeformParams(0.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(DeformParams(0.0, -1.0, 1.0), std::invalid_argument);

    const DeformParams q = conjugate(DeformParams(0.25, 2.0, 0.5));
    CHECK(q.theta == Catch::Approx(0.25 + pi / 2.0));
    CHECK(q.lambda == Catch::Approx(2.0));
    CHECK(q.c == Catch::Approx(0.5));

    const DeformParams lr = lopez_ros(DeformParams(0.25, 2.0, 0.5), 3.0);
    CHECK(lr.lambda == Catch::Approx(6.0));
    CHECK_THROWS_AS(lopez_ros(q, 0.0), std::invalid_argument);
}

TEST_CASE("polynomial catalog potentials match closed forms") {
    const auto data = catalog_make("enneper", 1).data;
    const Potentials pots = potentials(data);
    REQUIRE(pots.symbolic);
    const cplx w{0.5, 0.0};
    CHECK(std::abs(pots.h(w) - w) < 1e-15);
    CHECK(std::abs(pots.g(w) - (-w * w * w / 3.0)) < 1e-15);
    CHECK(std::abs(pots.T(w) - w * w) < 1e-15);

    // order 3: h = w, g = -w^7/7, T = w^4/2
    const auto data3 = catalog_make("enneper", 3).data;
    const Potentials p3 = potentials(data3);
    const cplx v{0.8, 0.0};
    CHECK(std::abs(p3.g(v) - (-std::pow(0.8, 7) / 7.0)) < 1e-15);
    CHECK(std::abs(p3.T(v) - std::pow(0.8, 4) / 2.0) < 1e-15);
}

TEST_CASE("quadrature potentials agree with closed forms") {
    const auto closed = catalog_make("enneper", 1).data;
    WeierstrassData raw(closed.F(), closed.G(), closed.domain());
    const Potentials qp = potentials(raw);
    const Potentials cp = potentials(closed);
    REQUIRE_FALSE(qp.symbolic);
    for (const cplx w : {cplx{0.37, 0.21}, cplx{-0.5, 0.1}, cplx{0.0, -0.62}}) {
        CHECK(std::abs(qp.h(w) - cp.h(w)) < 1e-9);
        CHECK(std::abs(qp.g(w) - cp.g(w)) < 1e-9);
        CHECK(std::abs(qp.T(w) - cp.T(w)) < 1e-9);
    }
}

TEST_CASE("log-data potentials evaluate their closed forms") {
    // h(0.3) on the log catalog entry collapses to log(13/7) + 2 atan(0.3):
    // the second log term has unit modulus argument, so it contributes the
    // arctangent after multiplication by i.
    const auto sch = catalog_make("scherk", 1).data;
    const Potentials pots = potentials(sch);
    const double expect_h = std::log(13.0 / 7.0) + 2.0 * std::atan(0.3);
    CHECK(std::abs(pots.h({0.3, 0.0}) - cplx{expect_h, 0.0}) < 1e-12);
    // T(i/2) = 2 log((1 + w^2)/(1 - w^2)) = 2 log(3/5)
    CHECK(std::abs(pots.T({0.0, 0.5}) - cplx{2.0 * std::log(0.6), 0.0}) < 1e-12);

    // the same values through adaptive quadrature on F and 2GF
    WeierstrassData raw(sch.F(), sch.G(), sch.domain());
    const Potentials qp = potentials(raw);
    CHECK(std::abs(qp.h({0.3, 0.0}) - cplx{expect_h, 0.0}) < 1e-8);
    CHECK(std::abs(qp.T({0.0, 0.5}) - cplx{2.0 * std::log(0.6), 0.0}) < 1e-8);
}

TEST_CASE("closed potentials are cross checked against the data") {
    const auto good = catalog_make("enneper", 1).data;
    WeierstrassData bad(good.F(), good.G(), good.domain());
    CHECK_THROWS_AS(
        bad.with_closed_potentials(hvar(), hpow(hvar(), 2), hpow(hvar(), 2)),
        std::invalid_argument);
}

TEST_CASE("surface points at pinned parameter values") {
    const auto enn1 = catalog_make("enneper", 1).data;
    const cplx w{0.5, 0.0};

    const SurfacePoint a = surface_point(enn1, DeformParams(0.0, 1.0, 1.0), w);
    CHECK(std::abs(a.horizontal - cplx{0.5 - 0.125 / 3.0, 0.0}) < 1e-15);
    CHECK(a.height == Catch::Approx(0.25));

    const SurfacePoint b = surface_point(enn1, DeformParams(0.0, 1.0, -1.0), w);
    CHECK(std::abs(b.horizontal - cplx{0.5 + 0.125 / 3.0, 0.0}) < 1e-15);

    // a quarter turn of the associate family rotates the horizontal part and
    // flips which potential combination appears
    const SurfacePoint c = surface_point(enn1, DeformParams(pi / 2.0, 1.0, 1.0), w);
    CHECK(std::abs(c.horizontal - cplx{0.0, 0.5 + 0.125 / 3.0}) < 1e-15);
    CHECK(std::abs(c.height) < 1e-15);

    const auto enn3 = catalog_make("enneper", 3).data;
    const SurfacePoint d = surface_point(enn3, DeformParams(0.0, 1.0, 1.0), {0.8, 0.0});
    CHECK(std::abs(d.horizontal - cplx{0.8 - std::pow(0.8, 7) / 7.0, 0.0}) < 1e-15);
}

TEST_CASE("planar factor extremes at both c signs") {
    // lambda = 2, c = rho/4 matches lambda = 1, c = rho in the planar factor
    const auto enn1 = catalog_make("enneper", 1).data;
    const Potentials pots = potentials(enn1);
    const cplx w{0.4, 0.33};
    const cplx f1 = planar_map(pots, DeformParams(0.0, 1.0, 0.8), w);
    const cplx f2 = planar_map(pots, DeformParams(0.0, 2.0, 0.2), w);
    CHECK(std::abs(f1 - f2) < 1e-15);
}

TEST_CASE("dilatation, jacobian and metric at pinned values") {
    const auto enn1 = catalog_make("enneper", 1).data;
    const cplx om = dilatation(enn1, DeformParams(0.0, 1.0, -1.0), {0.4, 0.3});
    CHECK(std::abs(om - cplx{0.07, 0.24}) < 1e-15);
    CHECK(std::abs(om) == Catch::Approx(0.25));

    const auto enn3 = catalog_make("enneper", 3).data;
    const cplx om3 = dilatation(enn3, DeformParams(0.0, 1.0, 1.0), {0.8, 0.0});
    CHECK(std::abs(om3 - cplx{-std::pow(0.8, 6), 0.0}) < 1e-15);

    CHECK(jacobian(enn1, DeformParams(0.0, 2.0, 1.0), {0.8, 0.0}) == Catch::Approx(-5.5536));
    CHECK(metric_coeff(enn1, DeformParams(0.0, 1.0, 1.0), {0.5, 0.0}) == Catch::Approx(1.5625));
}

TEST_CASE("metric coefficient ignores the associate angle") {
    const auto sch = catalog_make("scherk", 1).data;
    const cplx w{0.3, -0.2};
    const double base = metric_coeff(sch, DeformParams(0.0, 1.3, 0.7), w);
    for (int k = 1; k < 8; ++k) {
        const double m = metric_coeff(sch, DeformParams(k * pi / 4.0, 1.3, 0.7), w);
        CHECK(std::abs(m - base) <= 1e-15 * std::max(1.0, std::abs(base)));
    }
}

TEST_CASE("conformality residual vanishes across the catalog") {
    for (const char* id : {"enneper", "exponential", "scherk"}) {
        const auto data = catalog_make(id, 2).data;
        const auto pts = data.domain().interior_grid(6);
        for (const cplx& w : pts) {
            CHECK(conformality_residual(data, DeformParams(0.9, 1.4, -0.6), w) <= 1e-12);
        }
    }
}

TEST_CASE("height is independent of lambda and c") {
    const auto enn1 = catalog_make("enneper", 1).data;
    const cplx w{0.3, 0.4};
    const double z0 = surface_point(enn1, DeformParams(1.1, 1.0, 0.0), w).height;
    for (const double lam : {0.5, 1.0, 2.0})
        for (const double c : {-2.0, -0.3, 0.0, 1.7}) {
            const double z = surface_point(enn1, DeformParams(1.1, lam, c), w).height;
            CHECK(std::abs(z - z0) < 1e-15);
        }
}

TEST_CASE("midpoint of opposite deformations is the undeformed member") {
    const auto enn3 = catalog_make("enneper", 3).data;
    const cplx w{0.52, -0.31};
    const DeformParams plus(0.8, 1.3, 0.9), minus(0.8, 1.3, -0.9), zero(0.8, 1.3, 0.0);
    const SurfacePoint sp = surface_point(enn3, plus, w);
    const SurfacePoint sm = surface_point(enn3, minus, w);
    const SurfacePoint s0 = surface_point(enn3, zero, w);
    CHECK(std::abs(0.5 * (sp.horizontal + sm.horizontal) - s0.horizontal) < 1e-15);
    CHECK(std::abs(0.5 * (sp.height + sm.height) - s0.height) < 1e-15);
}

TEST_CASE("dual surface is the quarter-turn sign-flipped member") {
    const auto enn1 = catalog_make("enneper", 1).data;
    const DeformParams p(0.7, 1.3, 0.8);
    const cplx w{0.3, -0.4};
    const SurfacePoint d = dual_point(enn1, p, w);
    const SurfacePoint x = surface_point(enn1, DeformParams(p.theta + pi / 2.0, p.lambda, -p.c), w);
    CHECK(std::abs(d.horizontal - cplx{0.0, -1.0} * x.horizontal) < 1e-12);
    CHECK(std::abs(d.height - x.height) < 1e-12);
}

TEST_CASE("unit-c normalization preserves the horizontal part and scales height") {
    const auto enn1 = catalog_make("enneper", 1).data;
    const auto [norm, sign] = normalize_to_unit_c(enn1, -1.7);
    CHECK(sign == -1);
    const cplx w{0.3, -0.4};
    const SurfacePoint a = surface_point(enn1, DeformParams(0.5, 1.2, -1.7), w);
    const SurfacePoint b = surface_point(norm, DeformParams(0.5, 1.2, double(sign)), w);
    CHECK(std::abs(a.horizontal - b.horizontal) < 1e-12);
    CHECK(std::abs(a.height * std::sqrt(1.7) - b.height) < 1e-12);
    CHECK_THROWS_AS(normalize_to_unit_c(enn1, 0.0), ZeroC);
}

TEST_CASE("singular locus of a deformed disk member is a circle") {
    // 1 + c lambda^2 |G|^2 = 1 - 4 |w|^2 vanishes on |w| = 1/2
    const auto enn1 = catalog_make("enneper", 1).data;
    const auto locus = singular_locus(enn1, DeformParams(0.0, 2.0, -1.0), 64);
    REQUIRE(locus.size() >= 8);
    for (const cplx& w : locus) CHECK(std::abs(std::abs(w) - 0.5) < 1e-6);

    // positive c never annihilates the conformal factor
    CHECK(singular_locus(enn1, DeformParams(0.0, 2.0, 1.0), 32).empty());
}

TEST_CASE("catalog rejects unknown identifiers and bad orders") {
    CHECK_THROWS_AS(catalog_make("unknown", 1), ParseError);
    CHECK_THROWS_AS(catalog_make("enneper", 0), std::invalid_argument);
    CHECK(catalog_list().size() >= 4);
}
