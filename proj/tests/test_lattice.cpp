#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gb/errors.hpp"
#include "gb/lattice.hpp"
#include "gb/rng.hpp"

using namespace gb;

namespace {

// Exhaustive independent search over the eight swap/negation variants.
bool some_variant_admissible(double phi, double eta) {
    for (int swap = 0; swap < 2; ++swap) {
        for (int n1 = 0; n1 < 2; ++n1) {
            for (int n2 = 0; n2 < 2; ++n2) {
                double a = phi, b = eta;
                if (swap) std::swap(a, b);
                if (n1) a += M_PI;
                if (n2) b += M_PI;
                if (sign_conditions_hold(a, b)) return true;
            }
        }
    }
    return false;
}

bool lattices_equal_pointwise(const Lattice& a, const Lattice& b, Rng& rng) {
    for (int trial = 0; trial < 100; ++trial) {
        const long m = static_cast<long>(rng.uniform_index(21)) - 10;
        const long n = static_cast<long>(rng.uniform_index(21)) - 10;
        if (!coords_in_lattice(a.point(m, n), b, 1.0, 1e-9)) return false;
        if (!coords_in_lattice(b.point(m, n), a, 1.0, 1e-9)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("make_lattice basics") {
    const Lattice sq = make_lattice(0.0, M_PI / 2.0);
    CHECK(sq.b1.x == doctest::Approx(1.0));
    CHECK(sq.b1.y == doctest::Approx(0.0));
    CHECK(sq.b2.x == doctest::Approx(0.0));
    CHECK(sq.b2.y == doctest::Approx(1.0));

    // The generator pair of the worked deformation figure.
    const Lattice fig = make_lattice(-M_PI / 3.0, M_PI / 6.0);
    CHECK(fig.b1.x == doctest::Approx(0.5));
    CHECK(fig.b1.y == doctest::Approx(-std::sqrt(3.0) / 2.0));
    CHECK(fig.b2.x == doctest::Approx(std::sqrt(3.0) / 2.0));
    CHECK(fig.b2.y == doctest::Approx(0.5));

    CHECK_THROWS_AS(make_lattice(0.0, 0.0), Error);
    CHECK_THROWS_AS(make_lattice(1.0, 1.0 + M_PI), Error);
}

TEST_CASE("normalize_generators leaves an admissible pair unchanged") {
    // sin(phi-eta) = -1, sin(eta) = 1/2 -> ratio -2 < 0; sin(phi) = -sqrt(3)/2 -> ratio > 0.
    const Lattice fig = normalize_generators(make_lattice(-M_PI / 3.0, M_PI / 6.0));
    CHECK(fig.transforms.empty());
    CHECK(fig.phi == doctest::Approx(-M_PI / 3.0));
    CHECK(fig.eta == doctest::Approx(M_PI / 6.0));
    CHECK(!fig.degenerate);
}

TEST_CASE("normalize_generators finds a variant and preserves the point set") {
    Rng rng(5150);
    int nontrivial = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        const double eta = rng.uniform(0.0, 2.0 * M_PI);
        if (std::fabs(std::sin(phi - eta)) < 1e-3) continue;
        if (std::fabs(std::sin(phi)) < 1e-3 || std::fabs(std::sin(eta)) < 1e-3) continue;
        const Lattice in = make_lattice(phi, eta);
        REQUIRE(some_variant_admissible(phi, eta));
        const Lattice out = normalize_generators(in);
        CHECK(!out.degenerate);
        CHECK(sign_conditions_hold(out.phi, out.eta));
        CHECK(lattices_equal_pointwise(in, out, rng));
        if (!out.transforms.empty()) nontrivial++;
        // Idempotence.
        const Lattice twice = normalize_generators(out);
        CHECK(twice.transforms == out.transforms);
        CHECK(twice.phi == doctest::Approx(out.phi));
        CHECK(twice.eta == doctest::Approx(out.eta));
    }
    CHECK(nontrivial > 0);
}

TEST_CASE("normalize_generators: a pair needing a recorded transform") {
    const Lattice out = normalize_generators(make_lattice(M_PI / 3.0, M_PI / 6.0));
    CHECK(!out.transforms.empty());
    CHECK(sign_conditions_hold(out.phi, out.eta));
}

TEST_CASE("normalize_generators flags the horizontal-generator case") {
    const Lattice deg = normalize_generators(make_lattice(0.0, M_PI / 2.0));
    CHECK(deg.degenerate);
    CHECK(deg.b1.x == doctest::Approx(1.0));
    CHECK(deg.b1.y == doctest::Approx(0.0).epsilon(1e-12));

    // Horizontal generator in the second slot gets swapped forward.
    const Lattice deg2 = normalize_generators(make_lattice(M_PI / 2.0, M_PI));
    CHECK(deg2.degenerate);
    CHECK(deg2.b1.x == doctest::Approx(1.0));
    CHECK(std::fabs(deg2.b1.y) < 1e-9);
}

TEST_CASE("coords_in_lattice basics") {
    const Lattice fig = make_lattice(-M_PI / 3.0, M_PI / 6.0);
    const double scale = 1e-4;

    auto zero = coords_in_lattice({0, 0}, fig, scale, 1e-9 * scale);
    REQUIRE(zero.has_value());
    CHECK(zero->first == 0);
    CHECK(zero->second == 0);

    const Vec2 v = (fig.b1 * 2.0 - fig.b2) * scale;
    auto mn = coords_in_lattice(v, fig, scale, 1e-9 * scale);
    REQUIRE(mn.has_value());
    CHECK(mn->first == 2);
    CHECK(mn->second == -1);

    CHECK(!coords_in_lattice(fig.b1 * (0.5 * scale), fig, scale, 1e-9 * scale).has_value());
}

TEST_CASE("coords_in_lattice inverts point generation across a wide range") {
    Rng rng(808);
    const Lattice lat = make_lattice(0.37, 2.55);
    for (int trial = 0; trial < 200; ++trial) {
        const long m = static_cast<long>(rng.uniform_index(2001)) - 1000;
        const long n = static_cast<long>(rng.uniform_index(2001)) - 1000;
        const double scale = 1e-4;
        auto mn = coords_in_lattice(lat.point(m, n) * scale, lat, scale, 1e-6 * scale);
        REQUIRE(mn.has_value());
        CHECK(mn->first == m);
        CHECK(mn->second == n);
    }
}
