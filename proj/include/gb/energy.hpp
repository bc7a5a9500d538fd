#pragma once

#include <optional>
#include <vector>

#include "gb/construction.hpp"

namespace gb {

struct PredictedConstants {
    double E0 = 0.0;
    double E1 = 0.0;
    double A = 0.0;
    std::optional<double> A_RS;  // square lattice only
};

struct EnergyReport {
    double elastic = 0.0;
    double core = 0.0;
    double total = 0.0;
    PredictedConstants constants;
    double bound_value = 0.0;  // eps * L * E0 * sin(theta) * (A - log2 sin(theta))
    double ratio = 0.0;        // total / bound_value
};

struct SweepRow {
    double theta = 0.0;
    double sin_theta = 0.0;
    double elastic = 0.0;
    double core = 0.0;
    double total = 0.0;
    double normalized = 0.0;  // total / (eps * L * sin(theta))
    double neg_log2_sin = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    // Grid points where the construction does not exist (theta too large for
    // the dyadic frames, or the strips do not fit), with the reason.
    std::vector<double> skipped_sin_thetas;
    std::vector<std::string> skip_reasons;
    double slope = 0.0;      // of normalized against -log2 sin(theta)
    double intercept = 0.0;
    double r2 = 0.0;
};

// Squared Frobenius distance from F to the rotation group SO(2):
// |F|^2 + 2 - 2 sqrt(|F|^2 + 2 det F), valid for either sign of det F.
double dist2_so2(const Mat2& F);

// Elastic part of the energy: sum over cells of dist2_so2(strain) times the
// cell area outside the core bands. Only the dyadic fan cells contribute;
// band-intersecting cells are integrated by seeded Monte Carlo, the rest
// exactly. With params.unclipped_cores the natural extension of the clipped
// squares is used instead of the clipped cells.
double elastic_energy(const StrainField& f);

// Core part: sum over cores of (tau^2 / lambda_i^2) * area(band ∩ domain),
// with lambda_i = r0_i / eps. With params.unclipped_cores the band area is
// taken unclipped, (12 + pi) tau^2 eps^2 per core.
double core_energy(const StrainField& f);

// The closed-form constants of the energy bound for the normalized lattice.
PredictedConstants predicted_constants(const Params& p);

EnergyReport energy_report(const StrainField& f);
EnergyReport energy_report(const Params& p);  // builds the field first

// Build and evaluate the energy at each sin(theta), then fit
// normalized = intercept + slope * (-log2 sin(theta)) by least squares.
// Grid points at which the construction does not exist are recorded as
// skipped; at least three points must build.
SweepResult theta_sweep(const Params& p, const std::vector<double>& sin_thetas);

}  // namespace gb
