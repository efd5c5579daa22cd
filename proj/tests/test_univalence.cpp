#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <zmc/catalog.hpp>
#include <zmc/convexity.hpp>
#include <zmc/geometry2d.hpp>
#include <zmc/univalence.hpp>

using namespace zmc;

namespace {

std::vector<cplx> polygon_loop(const std::vector<cplx>& vertices, int per_edge) {
    std::vector<cplx> out;
    for (size_t i = 0; i < vertices.size(); ++i) {
        const cplx a = vertices[i], b = vertices[(i + 1) % vertices.size()];
        for (int k = 0; k < per_edge; ++k)
            out.push_back(a + (b - a) * (double(k) / per_edge));
    }
    return out;
}

PlanarMapFn affine_harmonic(cplx a) {
    return [a](cplx w) {
        PlanarMapSample s;
        s.value = w + a * std::conj(w);
        s.wirtinger = std::array<cplx, 2>{cplx{1.0, 0.0}, a};
        return s;
    };
}

} // namespace

TEST_CASE("boundary image of the identity lands on the circle") {
    const BoundaryTrace tr = boundary_image(holomorphic_map_fn(hvar()), DomainSpec::disk(1.0), 4);
    REQUIRE(tr.image_pts.size() == 4);
    CHECK(std::abs(tr.image_pts[0] - cplx{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(tr.image_pts[1] - cplx{0.0, 1.0}) < 1e-12);
    CHECK(std::abs(tr.image_pts[2] - cplx{-1.0, 0.0}) < 1e-12);
    CHECK(std::abs(tr.image_pts[3] - cplx{0.0, -1.0}) < 1e-12);
}

TEST_CASE("segment crossing predicate is strict") {
    CHECK(proper_crossing({0, 0}, {1, 1}, {0, 1}, {1, 0}));
    CHECK_FALSE(proper_crossing({0, 0}, {1, 0}, {1, 0}, {2, 0}));  // shared endpoint
    CHECK_FALSE(proper_crossing({0, 0}, {1, 0}, {0, 1}, {1, 1}));  // parallel
}

TEST_CASE("image classification separates convex, starlike and neither") {
    const auto square = polygon_loop({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 32);
    CHECK(classify_image(square).shape == ImageShape::Convex);

    // an L is starlike about its inner corner block but not convex
    const auto ell = polygon_loop({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, 32);
    const auto cl = classify_image(ell);
    CHECK(cl.shape == ImageShape::StarlikeNotConvex);

    // a U cannot see both prongs from any single point
    const auto u = polygon_loop({{0, 0}, {3, 0}, {3, 3}, {2, 3}, {2, 1}, {1, 1}, {1, 3}, {0, 3}}, 32);
    CHECK(classify_image(u).shape == ImageShape::Neither);

    // clockwise input is normalized before classification
    auto cw = square;
    std::reverse(cw.begin(), cw.end());
    CHECK(classify_image(cw).shape == ImageShape::Convex);
}

TEST_CASE("self crossing polylines are rejected with a location") {
    const std::vector<cplx> eight = {{0, 0}, {2, 2}, {2, 0}, {0, 2}};
    CHECK_THROWS_AS(classify_image(eight), NonSimplePolyline);
}

TEST_CASE("convex hull area matches the polygon area on convex input") {
    const auto square = polygon_loop({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 16);
    CHECK(convex_hull_area(square) == Catch::Approx(1.0));
    // dent one edge midpoint inward: polygon loses area, hull does not
    auto dented = square;
    dented[8] = {0.5, 0.25};
    CHECK(convex_hull_area(dented) == Catch::Approx(1.0));
    CHECK(std::abs(signed_area(dented)) < 1.0);
}

TEST_CASE("oracle accepts the identity and conformal members") {
    const UnivalenceReport rep =
        univalence_oracle(holomorphic_map_fn(hvar()), DomainSpec::disk(1.0), 96);
    CHECK(rep.verdict == Verdict::Univalent);
    CHECK(rep.jacobian_sign == JacobianSign::Positive);
    CHECK(rep.boundary_simple);
    CHECK_FALSE(rep.witness.has_value());
}

TEST_CASE("oracle rejects the squaring map with a genuine collision") {
    const UnivalenceReport rep =
        univalence_oracle(holomorphic_map_fn(hpow(hvar(), 2)), DomainSpec::disk(1.0), 96);
    CHECK(rep.verdict == Verdict::NotUnivalent);
    REQUIRE(rep.witness.has_value());
    CHECK(std::abs(rep.witness->w1 - rep.witness->w2) > 0.1);
    CHECK(rep.witness->image_distance <= 1e-9 * 4.0);
}

TEST_CASE("orientation reversing affine maps stay univalent") {
    const UnivalenceReport pos = univalence_oracle(affine_harmonic({0.4, 0.0}),
                                                   DomainSpec::disk(1.0), 96);
    CHECK(pos.verdict == Verdict::Univalent);
    CHECK(pos.jacobian_sign == JacobianSign::Positive);

    const UnivalenceReport neg = univalence_oracle(affine_harmonic({1.5, 0.0}),
                                                   DomainSpec::disk(1.0), 96);
    CHECK(neg.verdict == Verdict::Univalent);
    CHECK(neg.jacobian_sign == JacobianSign::Negative);
}

TEST_CASE("mixed jacobian sign is decisive") {
    PlanarMapFn fold = [](cplx w) {
        PlanarMapSample s;
        s.value = w + 0.8 * std::conj(w) * std::conj(w);
        s.wirtinger = std::array<cplx, 2>{cplx{1.0, 0.0}, 1.6 * std::conj(w)};
        return s;
    };
    const UnivalenceReport rep = univalence_oracle(fold, DomainSpec::disk(1.0), 96);
    CHECK(rep.verdict == Verdict::NotUnivalent);
    CHECK(rep.jacobian_sign == JacobianSign::Mixed);
}

TEST_CASE("oracle requires a workable resolution") {
    CHECK_THROWS_AS(univalence_oracle(holomorphic_map_fn(hvar()), DomainSpec::disk(1.0), 32),
                    ResolutionTooLow);
}

TEST_CASE("deformed polynomial members cross the graph threshold") {
    const auto enn1 = catalog_make("enneper", 1).data;
    const DomainSpec dom = enn1.domain();

    const auto inside =
        univalence_oracle(planar_map_fn(enn1, DeformParams(0.0, 1.0, 0.25)), dom, 96);
    CHECK(inside.verdict == Verdict::Univalent);

    const auto at_endpoint =
        univalence_oracle(planar_map_fn(enn1, DeformParams(0.0, 1.0, 1.0)), dom, 128);
    CHECK(at_endpoint.verdict == Verdict::Univalent);
    CHECK(at_endpoint.boundary_simple);

    const auto beyond =
        univalence_oracle(planar_map_fn(enn1, DeformParams(0.0, 1.0, 1.5)), dom, 96);
    CHECK(beyond.verdict == Verdict::NotUnivalent);
    CHECK(beyond.jacobian_sign == JacobianSign::Mixed);
}

TEST_CASE("collapsing boundary arcs do not produce false witnesses") {
    // The whole rim of this member maps onto four corner points; interior
    // pairs pushed toward the rim must not be mistaken for collisions.
    const auto sch = catalog_make("scherk", 1).data;
    const PlanarMapFn f = planar_map_fn(sch, DeformParams(0.0, 1.0, 1.0));
    const UnivalenceReport rep = univalence_oracle(f, sch.domain(), 128);
    CHECK(rep.verdict == Verdict::Univalent);
    CHECK(rep.boundary_simple);

    const BoundaryTrace tr = boundary_image(f, sch.domain(), 1024, 1e-6);
    const auto cl = classify_image(tr.image_pts);
    CHECK(cl.shape == ImageShape::Convex);
    // image is the open square with vertices (+-pi, +-pi)
    for (const cplx& z : tr.image_pts) {
        CHECK(std::abs(z.real()) < pi + 1e-6);
        CHECK(std::abs(z.imag()) < pi + 1e-6);
    }
}

TEST_CASE("undeformed log member maps onto a starlike cross") {
    const auto sch = catalog_make("scherk", 1).data;
    const PlanarMapFn h = planar_map_fn(sch, DeformParams(0.0, 1.0, 0.0));
    const UnivalenceReport rep = univalence_oracle(h, sch.domain(), 128);
    CHECK(rep.verdict == Verdict::Univalent);

    const BoundaryTrace tr = boundary_image(h, sch.domain(), 1024, 1e-6);
    CHECK(classify_image(tr.image_pts).shape == ImageShape::StarlikeNotConvex);
}

TEST_CASE("exponential member on the truncated half plane is a graph") {
    const auto ex1 = catalog_make("exponential", 1).data;
    const auto rep =
        univalence_oracle(planar_map_fn(ex1, DeformParams(0.0, 1.0, 1.0)), ex1.domain(), 96);
    CHECK(rep.verdict == Verdict::Univalent);
}

TEST_CASE("analytic convexity census") {
    const DomainSpec disk = DomainSpec::disk(1.0);
    const ConvexityReport id = analytic_convexity(hvar(), disk, 64);
    CHECK(id.convex);
    CHECK(id.min_value == Catch::Approx(1.0));

    const ConvexityReport cubic =
        analytic_convexity(hsum({hvar(), hpow(hvar(), 3)}), disk, 64);
    CHECK_FALSE(cubic.convex);
    CHECK(cubic.min_value < -1.0);

    // the log map of the cross: convexity fails along the diagonal spokes
    const auto sch = catalog_make("scherk", 1).data;
    const ConvexityReport cross = analytic_convexity(sch.closed_h(), disk, 512);
    CHECK_FALSE(cross.convex);
    CHECK(cross.min_value < -0.2);

    CHECK_THROWS_AS(analytic_convexity(hvar(), DomainSpec::half_plane(), 64),
                    std::invalid_argument);
    CHECK_THROWS_AS(analytic_convexity(hlit(1.0), disk, 64), DerivativeVanishes);
}

TEST_CASE("weierstrass convexity uses the data derivative directly") {
    const auto enn1 = catalog_make("enneper", 1).data;
    const ConvexityReport rep = weierstrass_convexity(enn1, 64);
    CHECK(rep.convex);
    CHECK(rep.min_value == Catch::Approx(1.0));
}

TEST_CASE("hypocycloid boundary of the deformed polynomial member") {
    const auto enn3 = catalog_make("enneper", 3).data;
    const PlanarMapFn f = planar_map_fn(enn3, DeformParams(0.0, 1.0, 1.0));
    const BoundaryTrace tr = boundary_image(f, enn3.domain(), 1024, 1e-6);
    CHECK(classify_image(tr.image_pts).shape == ImageShape::StarlikeNotConvex);
}
