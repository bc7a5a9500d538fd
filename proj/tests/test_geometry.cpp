#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gb/errors.hpp"
#include "gb/geometry.hpp"
#include "gb/rng.hpp"

using namespace gb;

namespace {

const double kTol = geometry_tolerance(10.0);

Polygon unit_square() { return Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

// Convex polygon from points on a circle, sorted by angle.
Polygon random_convex(Rng& rng, int nverts, double radius, Vec2 center) {
    std::vector<double> angles(nverts);
    for (double& a : angles) a = rng.uniform(0.0, 2.0 * M_PI);
    std::sort(angles.begin(), angles.end());
    std::vector<Vec2> v;
    for (double a : angles) {
        v.push_back(center + Vec2{radius * std::cos(a), radius * std::sin(a)});
    }
    return Polygon(std::move(v));
}

// Hit-or-miss area of the region "inside p and inside r" over p's bbox.
double mc_intersection_area(const Polygon& p, const Rect& r, int n, std::uint64_t seed) {
    Rng rng(seed);
    const Rect bb = p.bbox();
    long hits = 0;
    for (int i = 0; i < n; ++i) {
        const Vec2 x{rng.uniform(bb.lo.x, bb.hi.x), rng.uniform(bb.lo.y, bb.hi.y)};
        if (p.contains(x, 0.0) && r.contains(x, 0.0)) hits++;
    }
    return bb.area() * static_cast<double>(hits) / n;
}

}  // namespace

TEST_CASE("polygon area: unit cases") {
    CHECK(polygon_area(unit_square()) == doctest::Approx(1.0));
    CHECK(polygon_area(Polygon({{0, 0}, {1, 0}, {0, 1}})) == doctest::Approx(0.5));
    // Fan triangle of the first dyadic frame with r_{n-1}=1, r_n=2.
    CHECK(polygon_area(Polygon({{1, -1}, {2, 2}, {1, 1}})) == doctest::Approx(1.0));
}

TEST_CASE("polygon area: degenerate input throws") {
    CHECK_THROWS_AS(polygon_area(Polygon({{0, 0}, {1, 1}, {2, 2}})), Error);
    CHECK_THROWS_AS(polygon_area(Polygon({{0, 0}, {1, 1}})), Error);
}

TEST_CASE("polygon orientation is normalized to counterclockwise") {
    Polygon cw({{0, 1}, {1, 1}, {1, 0}, {0, 0}});
    CHECK(cw.signed_area() > 0.0);
}

TEST_CASE("polygon area properties: translation invariance and dilation") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        Polygon p = random_convex(rng, 3 + static_cast<int>(rng.uniform_index(8)), 1.0 + rng.uniform01(),
                                  {rng.uniform(-3, 3), rng.uniform(-3, 3)});
        const double area = polygon_area(p);
        const Vec2 shift{rng.uniform(-10, 10), rng.uniform(-10, 10)};
        std::vector<Vec2> tv, sv;
        const double scale = 0.5 + 2.0 * rng.uniform01();
        for (const Vec2& v : p.vertices()) {
            tv.push_back(v + shift);
            sv.push_back(v * scale);
        }
        CHECK(polygon_area(Polygon(tv)) == doctest::Approx(area).epsilon(1e-12));
        CHECK(polygon_area(Polygon(sv)) == doctest::Approx(area * scale * scale).epsilon(1e-12));
    }
}

TEST_CASE("shared_edge: abutting squares") {
    Polygon a = unit_square();
    Polygon b({{1, 0}, {2, 0}, {2, 1}, {1, 1}});
    auto e = shared_edge(a, b, kTol);
    REQUIRE(e.has_value());
    CHECK(e->length() == doctest::Approx(1.0));
    CHECK(std::min(e->a.y, e->b.y) == doctest::Approx(0.0));
    CHECK(std::max(e->a.y, e->b.y) == doctest::Approx(1.0));
    CHECK(e->a.x == doctest::Approx(1.0));
    CHECK(e->b.x == doctest::Approx(1.0));
}

TEST_CASE("shared_edge: disjoint squares share nothing") {
    Polygon a = unit_square();
    Polygon b({{2, 2}, {3, 2}, {3, 3}, {2, 3}});
    CHECK(!shared_edge(a, b, kTol).has_value());
}

TEST_CASE("shared_edge: the two fan triangles of one frame") {
    // r0 = 1, r1 = 2, strip-1 orientation.
    Polygon da({{1, -1}, {2, 2}, {1, 1}});
    Polygon db({{2, 2}, {2, -2}, {1, -1}});
    auto e = shared_edge(da, db, kTol);
    REQUIRE(e.has_value());
    const Vec2 lo = e->a.y < e->b.y ? e->a : e->b;
    const Vec2 hi = e->a.y < e->b.y ? e->b : e->a;
    CHECK(lo.x == doctest::Approx(1.0));
    CHECK(lo.y == doctest::Approx(-1.0));
    CHECK(hi.x == doctest::Approx(2.0));
    CHECK(hi.y == doctest::Approx(2.0));
}

TEST_CASE("shared_edge symmetry on random abutting polygons") {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const double x = rng.uniform(-1, 1);
        Polygon a({{x - 1, 0}, {x, 0}, {x, 1}, {x - 1, 1}});
        Polygon b({{x, rng.uniform(-0.5, 0.2)}, {x + 1, -0.5}, {x + 1, 1.5}, {x, rng.uniform(0.8, 1.5)}});
        auto e1 = shared_edge(a, b, kTol);
        auto e2 = shared_edge(b, a, kTol);
        REQUIRE(e1.has_value() == e2.has_value());
        if (e1) {
            CHECK(e1->length() == doctest::Approx(e2->length()).epsilon(1e-9));
            const bool same = (e1->a - e2->a).norm() < 1e-9 && (e1->b - e2->b).norm() < 1e-9;
            const bool flipped = (e1->a - e2->b).norm() < 1e-9 && (e1->b - e2->a).norm() < 1e-9;
            CHECK((same || flipped));
        }
    }
}

TEST_CASE("clip_to_rect: containment cases") {
    Polygon big({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    const Rect unit{{0, 0}, {1, 1}};
    auto c = clip_to_rect(big, unit, kTol);
    REQUIRE(c.has_value());
    CHECK(polygon_area(*c) == doctest::Approx(1.0));

    Polygon inner({{0.2, 0.2}, {0.8, 0.2}, {0.5, 0.8}});
    auto c2 = clip_to_rect(inner, unit, kTol);
    REQUIRE(c2.has_value());
    CHECK(polygon_area(*c2) == doctest::Approx(polygon_area(inner)));
}

TEST_CASE("clip_to_rect: triangle against the unit square") {
    Polygon tri({{0, 0}, {2, 0}, {0, 2}});
    auto c = clip_to_rect(tri, {{0, 0}, {1, 1}}, kTol);
    REQUIRE(c.has_value());
    // The square's far corner lies on the hypotenuse, so the intersection is
    // the whole unit square; cross-checked against a sampling oracle.
    CHECK(polygon_area(*c) == doctest::Approx(1.0).epsilon(1e-9));
    const double mc = mc_intersection_area(tri, {{0, 0}, {1, 1}}, 200000, 5);
    CHECK(polygon_area(*c) == doctest::Approx(mc).epsilon(0.02));
}

TEST_CASE("clip_to_rect: disjoint returns nothing") {
    Polygon tri({{5, 5}, {6, 5}, {5, 6}});
    CHECK(!clip_to_rect(tri, {{0, 0}, {1, 1}}, kTol).has_value());
}

TEST_CASE("clip_to_rect properties: area bound and idempotence") {
    Rng rng(91);
    for (int trial = 0; trial < 40; ++trial) {
        Polygon p = random_convex(rng, 3 + static_cast<int>(rng.uniform_index(9)),
                                  0.5 + 2.0 * rng.uniform01(), {rng.uniform(-2, 2), rng.uniform(-2, 2)});
        const Rect r{{rng.uniform(-2, 0), rng.uniform(-2, 0)}, {rng.uniform(0.5, 3), rng.uniform(0.5, 3)}};
        auto c = clip_to_rect(p, r, kTol);
        if (!c) continue;
        const double ca = polygon_area(*c);
        CHECK(ca <= polygon_area(p) * (1 + 1e-9));
        CHECK(ca <= r.area() * (1 + 1e-9));
        auto c2 = clip_to_rect(*c, r, kTol);
        REQUIRE(c2.has_value());
        CHECK(polygon_area(*c2) == doctest::Approx(ca).epsilon(1e-9));
        // Against the sampling oracle.
        const double mc = mc_intersection_area(p, r, 60000, mix_key(7, trial));
        CHECK(ca == doctest::Approx(mc).epsilon(0.08));
    }
}

TEST_CASE("clip handles the notched cell used by the construction") {
    // Left half of a construction square with the core notch, clipped across
    // the notch height.
    const double ell = 2.0, r0 = 1.0;
    Polygon c_shape({{-ell, -ell}, {0, -ell}, {0, -r0}, {-r0, -r0}, {-r0, r0}, {0, r0}, {0, ell}, {-ell, ell}});
    CHECK(polygon_area(c_shape) == doctest::Approx(2 * ell * 2 * ell / 2.0 - 2 * r0 * r0 / 1.0));
    auto c = clip_to_rect(c_shape, {{-ell, 0.0}, {0.0, ell}}, kTol);
    REQUIRE(c.has_value());
    CHECK(polygon_area(*c) == doctest::Approx(ell * ell - r0 * r0));
}

TEST_CASE("square_band_area: closed forms") {
    CHECK(square_band_area(1.0, 0.0) == doctest::Approx(0.0));
    CHECK(square_band_area(1.0, 1.0) == doctest::Approx(12.0 + M_PI));
    CHECK(square_band_area(2.0, 1.0) == doctest::Approx(28.0 + M_PI));
    CHECK_THROWS_AS(square_band_area(-1.0, 0.5), Error);
    CHECK_THROWS_AS(square_band_area(1.0, -0.5), Error);
}

TEST_CASE("square_band_area agrees with a seeded Monte Carlo oracle") {
    // 1e7 samples over [-2,2]^2 for the (1,1) case, as an absolute anchor.
    {
        Rng rng(424242);
        const int n = 10000000;
        long hits = 0;
        for (int i = 0; i < n; ++i) {
            const Vec2 x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
            if (point_in_band(x, {0, 0}, 1.0, 1.0)) hits++;
        }
        const double est = 16.0 * static_cast<double>(hits) / n;
        CHECK(std::fabs(est - square_band_area(1.0, 1.0)) / (12.0 + M_PI) < 0.002);
    }
    // Three-standard-error agreement on random (r0, rho) pairs.
    Rng prng(1313);
    for (int trial = 0; trial < 10; ++trial) {
        const double r0 = 0.3 + 2.0 * prng.uniform01();
        const double rho = 2.0 * prng.uniform01();
        const double reach = r0 + rho;
        const int n = 400000;
        Rng rng(mix_key(99, trial));
        long hits = 0;
        for (int i = 0; i < n; ++i) {
            const Vec2 x{rng.uniform(-reach, reach), rng.uniform(-reach, reach)};
            if (point_in_band(x, {0, 0}, r0, rho)) hits++;
        }
        const double box = 4.0 * reach * reach;
        const double p = static_cast<double>(hits) / n;
        const double est = box * p;
        const double se = box * std::sqrt(p * (1 - p) / n);
        CHECK(std::fabs(est - square_band_area(r0, rho)) < 3.0 * se + 1e-12);
    }
}

TEST_CASE("point_in_band membership") {
    CHECK(!point_in_band({0, 0}, {0, 0}, 1.0, 0.5));  // centre is a full r0 away
    CHECK(point_in_band({1, 0}, {0, 0}, 1.0, 0.0));   // on the boundary
    CHECK(!point_in_band({2.1, 2.1}, {0, 0}, 1.0, 1.0));  // corner distance sqrt(2)*1.1
    CHECK(point_in_band({1.9, 0.3}, {0, 0}, 1.0, 1.0));
    CHECK(point_in_band({0.0, 0.05}, {0, 0}, 1.0, 0.96));
}

TEST_CASE("segment_to_square_distance") {
    CHECK(segment_to_square_distance({{2, -3}, {2, 3}}, {0, 0}, 1.0) == doctest::Approx(1.0));
    CHECK(segment_to_square_distance({{-3, 0}, {3, 0}}, {0, 0}, 1.0) == doctest::Approx(0.0));
    CHECK(segment_to_square_distance({{0, 0}, {0.1, 0.1}}, {0, 0}, 1.0) == doctest::Approx(0.0));
    CHECK(segment_to_square_distance({{2, 2}, {3, 2}}, {0, 0}, 1.0) ==
          doctest::Approx(std::sqrt(2.0)));
}
