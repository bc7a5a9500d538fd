#include "gb/lattice.hpp"

#include <cmath>

#include "gb/errors.hpp"

namespace gb {

namespace {

constexpr double kCollinearTol = 1e-9;
constexpr double kDegenerateSineTol = 1e-9;

Lattice from_angles(double phi, double eta) {
    Lattice l;
    l.phi = phi;
    l.eta = eta;
    l.b1 = {std::cos(phi), std::sin(phi)};
    l.b2 = {std::cos(eta), std::sin(eta)};
    return l;
}

}  // namespace

bool sign_conditions_hold(double phi, double eta) {
    const double s = std::sin(phi - eta);
    const double sphi = std::sin(phi);
    const double seta = std::sin(eta);
    if (sphi == 0.0 || seta == 0.0) return false;
    return (s / seta < 0.0) && (s / sphi > 0.0);
}

Lattice make_lattice(double phi, double eta) {
    if (std::fabs(std::sin(phi - eta)) <= kCollinearTol) {
        throw validation_error("make_lattice: generators are collinear (|sin(phi - eta)| too small)");
    }
    return from_angles(phi, eta);
}

Lattice normalize_generators(const Lattice& l) {
    const bool phi_flat = std::fabs(std::sin(l.phi)) < kDegenerateSineTol;
    const bool eta_flat = std::fabs(std::sin(l.eta)) < kDegenerateSineTol;
    if (phi_flat || eta_flat) {
        // Move the horizontal generator to slot 1 and orient it along +e1.
        double phi = l.phi;
        double eta = l.eta;
        std::vector<std::string> applied;
        if (eta_flat && !phi_flat) {
            std::swap(phi, eta);
            applied.push_back("swap");
        }
        if (std::cos(phi) < 0.0) {
            phi += M_PI;
            applied.push_back("negate-b1");
        }
        Lattice out = from_angles(phi, eta);
        out.degenerate = true;
        out.transforms = l.transforms;
        out.transforms.insert(out.transforms.end(), applied.begin(), applied.end());
        return out;
    }

    struct Variant {
        bool swap;
        bool neg1;
        bool neg2;
        const char* names[3];
    };
    // Fixed search order keeps normalization deterministic.
    static const Variant kVariants[8] = {
        {false, false, false, {nullptr, nullptr, nullptr}},
        {true, false, false, {"swap", nullptr, nullptr}},
        {false, true, false, {"negate-b1", nullptr, nullptr}},
        {false, false, true, {"negate-b2", nullptr, nullptr}},
        {true, true, false, {"swap", "negate-b1", nullptr}},
        {true, false, true, {"swap", "negate-b2", nullptr}},
        {false, true, true, {"negate-b1", "negate-b2", nullptr}},
        {true, true, true, {"swap", "negate-b1", "negate-b2", }},
    };

    for (const Variant& v : kVariants) {
        double phi = l.phi;
        double eta = l.eta;
        if (v.swap) std::swap(phi, eta);
        if (v.neg1) phi += M_PI;
        if (v.neg2) eta += M_PI;
        if (sign_conditions_hold(phi, eta)) {
            Lattice out = from_angles(phi, eta);
            out.transforms = l.transforms;
            for (const char* name : v.names) {
                if (name != nullptr) out.transforms.emplace_back(name);
            }
            return out;
        }
    }
    throw validation_error("normalize_generators: no swap/negation variant satisfies the sign conditions");
}

std::pair<long, long> nearest_lattice_coords(const Vec2& v, const Lattice& l, double scale) {
    if (scale <= 0.0) throw validation_error("nearest_lattice_coords: scale must be positive");
    const double det = l.b1.cross(l.b2);
    // Inverse of the generator matrix [b1 b2], applied to v / scale.
    const double mx = (v.x * l.b2.y - v.y * l.b2.x) / det / scale;
    const double nx = (v.y * l.b1.x - v.x * l.b1.y) / det / scale;
    return {static_cast<long>(std::llround(mx)), static_cast<long>(std::llround(nx))};
}

std::optional<std::pair<long, long>> coords_in_lattice(const Vec2& v, const Lattice& l, double scale,
                                                       double tol) {
    const auto [m, n] = nearest_lattice_coords(v, l, scale);
    const Vec2 rec = l.point(m, n) * scale;
    if ((v - rec).norm() > tol) return std::nullopt;
    return std::make_pair(m, n);
}

}  // namespace gb
