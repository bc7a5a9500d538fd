#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gb/geometry.hpp"
#include "gb/lattice.hpp"

namespace gb {

// All scalar inputs of the model plus numerical controls. sin_theta is the
// canonical misorientation parameter: every formula of the construction uses
// the sine directly, so configurations given as sin(theta) stay exact.
struct Params {
    double epsilon = 1e-3;   // microscopic scale
    double tau = 1.0;        // lattice spacing in units of epsilon
    double lambda = 4.0;     // core radius in units of epsilon
    double sin_theta = 0.03125;
    Lattice lattice;         // as supplied; normalized during the build
    double L = 1.0;          // domain is [-L, L] x [-2L, 0]
    double l = 0.05;         // width of the boundary-condition strips
    int mc_samples = 20000;  // Monte Carlo points per band-affected cell
    std::uint64_t seed = 1;
    bool unclipped_cores = false;  // estimate core/elastic terms on unclipped squares
    bool strict_loops = true;      // circulation loops must clear the core bands

    double cos_theta() const;
    double theta() const;
    double tau_eps() const { return tau * epsilon; }
    double lambda_eps() const { return lambda * epsilon; }
    Rect domain() const { return {{-L, -2.0 * L}, {L, 0.0}}; }
    double tolerance() const;  // geometric tolerance for this domain

    void validate() const;  // throws Validation on violated invariants
};

// Solved per-strip geometry. Index 0 is strip 1 (left of the interface),
// index 1 is strip 2. In the degenerate single-strip variant N[1] == 0.
struct StripLayout {
    double r_bar[2] = {0.0, 0.0};  // outer half-side of the construction squares
    int n_bar[2] = {0, 0};         // dyadic annulus count, >= 1
    double r0[2] = {0.0, 0.0};     // snapped core half-side, r_bar = 2^n_bar * r0
    long N[2] = {0, 0};            // squares per strip, ceil(L / r_bar)
    bool single_strip = false;

    double r_n(int strip, int n) const { return std::ldexp(r0[strip], n); }
};

enum class RegionKind {
    SigmaMinusTheta,
    SigmaTheta,
    D0,
    QlOrQr,
    Ta,
    Tb,
    DeltaA,
    DeltaB,
};

const char* region_kind_name(RegionKind k);
std::optional<RegionKind> region_kind_from_name(const std::string& name);

struct RegionDescriptor {
    RegionKind kind = RegionKind::D0;
    int strip = 0;    // 1 or 2; 0 for the outer Sigma regions
    long square = 0;  // k in 1..N_i; 0 for the outer regions
    int annulus = 0;  // n in 1..n_bar, DeltaA/DeltaB only

    bool in_strip() const { return strip != 0; }
};

struct AffineMap {
    Mat2 A;
    Vec2 c;
    Vec2 operator()(const Vec2& x) const { return A.apply(x) + c; }
};

struct Cell {
    Polygon polygon;  // clipped to the domain
    RegionDescriptor region;
    std::optional<AffineMap> affine;  // absent exactly on D0 cells
    Mat2 strain;
    double unclipped_area = 0.0;  // area before clipping to the domain
};

struct CoreSite {
    Vec2 center;
    double half_side = 0.0;  // r0 of its strip
    int strip = 1;
    long square = 1;
};

struct StrainField;

// Constant-time point-to-cell lookup exploiting the strip/square structure.
class CellLocator {
  public:
    CellLocator() = default;
    explicit CellLocator(const StrainField& field);

    // Index into field.cells of a cell containing p (boundary inclusive,
    // first match in build order), or -1.
    long locate(const Vec2& p) const;

    // Indices of all cells whose square could touch the given bbox.
    std::vector<long> candidates(const Rect& bb) const;

    // Cell indices grouped by (strip, square); strips are 0-based here.
    const std::vector<long>& square_cells(int strip, long k) const;
    const std::vector<long>& outer_cells() const { return outer_; }

  private:
    const StrainField* field_ = nullptr;
    std::vector<std::vector<long>> squares_[2];
    std::vector<long> outer_;
};

struct StrainField {
    std::vector<Cell> cells;
    std::vector<CoreSite> cores;  // one per construction square, clipped or not
    Params params;                // with the normalized lattice
    StripLayout layout;

    // Burgers direction of the given strip (1 or 2) in the normalized lattice.
    Vec2 burgers_dir(int strip) const;
    // Rotation carried by the given strip: R_{-theta} for strip 1, R_theta for strip 2.
    Mat2 strip_rotation(int strip) const;
};

// Half-heights of the two strips fixed by the rank-one condition across the
// strip interface. Throws when the sign conditions fail or the strips do not
// fit in the domain.
std::pair<double, double> solve_spacings(const Params& p);

// Dyadic snapping: n_bar = max(1, round(log2(r_bar / lambda eps))) and
// r0 = r_bar * 2^-n_bar, so r_bar is preserved exactly. Throws (theta too
// large) when r_bar <= lambda*eps.
std::pair<int, double> snap_dyadic(double r_bar, const Params& p);

StripLayout build_layout(const Params& p);

// The polygonal partition of the domain: outer strips, and for every
// construction square its core D0, lateral region, top/bottom transition
// regions and dyadic fan triangles, all clipped to the domain. Strains and
// affine maps are not assigned here.
std::vector<Cell> build_partition(const Params& p, const StripLayout& layout);

// Constant gradient of the affine interpolation with values v_i at points p_i.
Mat2 interpolation_gradient(const Vec2& p1, const Vec2& p2, const Vec2& p3, const Vec2& v1,
                            const Vec2& v2, const Vec2& v3);

// Affine deformation of a region; nullopt for D0 where only the strain
// (identity) is defined.
std::optional<AffineMap> affine_for_region(const RegionDescriptor& region, const Params& p,
                                           const StripLayout& layout);

// Full pipeline: normalize the lattice, solve spacings, snap, partition,
// assign deformations and strains, record the core sites.
StrainField build_strain_field(const Params& p);

}  // namespace gb
