#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gb/construction.hpp"

namespace gb {

// Tangential strain jump across one interface segment between two cells.
// The tangent is the unit direction of `edge`; jump_tangential is
// (strain_left - strain_right) * t with `left`/`right` in build order.
struct InterfaceJump {
    Segment edge;
    long left_cell = -1;
    long right_cell = -1;
    RegionDescriptor left_region;
    RegionDescriptor right_region;
    Vec2 jump_tangential;
    bool on_core_boundary = false;
};

struct CoreCirculation {
    long core_index = -1;
    bool skipped = false;  // core too close to the domain boundary to encircle
    Vec2 value;
    long m = 0, n = 0;  // lattice coordinates of value / (tau eps)
    bool ok = false;
};

struct LoopCheck {
    Vec2 value;
    bool coords_found = false;
    long m = 0, n = 0;
    long expected_m = 0, expected_n = 0;
    std::size_t enclosed_cores = 0;
    bool ok = false;
};

struct H2Result {
    bool ok = false;
    std::vector<CoreCirculation> cores;
    std::vector<LoopCheck> loops;
};

struct AdmissibilityReport {
    bool h1_ok = false;
    bool h2_ok = false;
    bool h3_ok = false;
    bool continuity_ok = false;
    double max_offcore_jump = 0.0;
    double max_strain_norm = 0.0;
    double deformation_mismatch = 0.0;
    H2Result h2;
    std::vector<std::string> violations;

    bool all_ok() const { return h1_ok && h2_ok && h3_ok && continuity_ok; }
};

struct CheckOptions {
    double h1_rel_tol = 1e-9;        // times the max cell strain norm
    double h3_tol = 1e-12;           // entrywise strain tolerance on the boundary strips
    double continuity_rel_tol = 1e-9;  // times tau*eps
    int n_random_loops = 32;
    std::uint64_t seed = 1;
};

// Every positive-length interface between two cells, with its tangential
// strain jump. Edges on a translate of the core boundary are flagged.
std::vector<InterfaceJump> interface_jumps(const StrainField& f);

// True iff every off-core interface carries a tangential jump of at most
// rel_tol times the largest cell strain norm. Also returns that maximum jump.
std::pair<bool, double> check_h1(const StrainField& f, double rel_tol = 1e-9);

// Exact line integral of beta * t over a closed polyline (first vertex
// repeated last, counterclockwise for positive enclosure). The loop must
// avoid the core bands; in strict mode it must clear them by the full band
// radius. Throws on open or invalid loops.
Vec2 circulation(const StrainField& f, const std::vector<Vec2>& loop);
Vec2 circulation(const StrainField& f, const CellLocator& locator, const std::vector<Vec2>& loop);

// Certify the circulation of every encircleable core (must equal -tau eps b_i)
// and of seeded random rectilinear loops (must match the negative sum of the
// enclosed cores' generators in lattice coordinates).
H2Result check_h2(const StrainField& f, int n_random_loops, std::uint64_t seed);

// Strain equals R_{-theta} / R_{theta} on the two boundary-condition strips.
bool check_h3(const StrainField& f, double tol = 1e-12);

// Maximum disagreement of adjacent affine deformations along shared edges,
// measured after removing the nearest lattice translation in tau eps B. Slip
// by a lattice vector is invisible to the crystal, so it is not a defect of
// the deformation; anything else is.
double deformation_continuity(const StrainField& f);

AdmissibilityReport run_admissibility(const StrainField& f, const CheckOptions& opts);

}  // namespace gb
