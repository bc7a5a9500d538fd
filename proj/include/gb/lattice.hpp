#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gb/geometry.hpp"

namespace gb {

// Bravais lattice spanned over the integers by two unit generators
// b1 = (cos phi, sin phi) and b2 = (cos eta, sin eta).
struct Lattice {
    Vec2 b1;
    Vec2 b2;
    double phi = 0.0;
    double eta = 0.0;
    // Set when sin(phi) or sin(eta) vanishes: the boundary mismatch is along
    // e1 alone and the construction switches to its single-strip variant.
    bool degenerate = false;
    // Transforms applied by normalize_generators, in order.
    std::vector<std::string> transforms;

    Vec2 point(long m, long n) const { return b1 * static_cast<double>(m) + b2 * static_cast<double>(n); }
};

// Build a lattice from generator angles. Throws when the generators are
// (numerically) collinear.
Lattice make_lattice(double phi, double eta);

// Returns a lattice generating the same point set whose angles satisfy
//   sin(phi - eta) / sin(eta) < 0   and   sin(phi - eta) / sin(phi) > 0,
// searching the eight swap/negation variants in a fixed order. When sin(phi)
// or sin(eta) vanishes the result is instead flagged degenerate, with the
// near-horizontal generator moved to slot 1 and pointing along +e1.
Lattice normalize_generators(const Lattice& l);

// Both sign conditions, evaluated directly.
bool sign_conditions_hold(double phi, double eta);

// Integer coordinates (m, n) with |v - scale*(m*b1 + n*b2)| <= tol, obtained
// by inverting the generator matrix and rounding; nullopt when the rounded
// point misses v by more than tol.
std::optional<std::pair<long, long>> coords_in_lattice(const Vec2& v, const Lattice& l, double scale,
                                                       double tol);

// Rounded coordinates of the nearest scaled lattice point, with no tolerance
// acceptance test.
std::pair<long, long> nearest_lattice_coords(const Vec2& v, const Lattice& l, double scale);

}  // namespace gb
