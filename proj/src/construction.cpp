#include "gb/construction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gb/errors.hpp"

namespace gb {

double Params::cos_theta() const { return std::sqrt((1.0 - sin_theta) * (1.0 + sin_theta)); }

double Params::theta() const { return std::asin(sin_theta); }

double Params::tolerance() const { return geometry_tolerance(2.0 * std::sqrt(2.0) * L); }

void Params::validate() const {
    if (!(epsilon > 0.0)) throw validation_error("params: epsilon must be positive");
    if (!(tau > 0.0 && tau < lambda)) throw validation_error("params: need 0 < tau < lambda");
    if (!(sin_theta > 0.0 && sin_theta < 1.0)) {
        throw validation_error("params: need 0 < theta < pi/2 (0 < sin(theta) < 1)");
    }
    if (!(L > 0.0)) throw validation_error("params: L must be positive");
    if (!(l > 0.0 && l < L / 10.0)) throw validation_error("params: need 0 < l < L/10");
    if (mc_samples <= 0) throw validation_error("params: mc_samples must be positive");
    if (std::fabs(std::sin(lattice.phi - lattice.eta)) <= 1e-9) {
        throw validation_error("params: lattice generators are collinear");
    }
}

const char* region_kind_name(RegionKind k) {
    switch (k) {
        case RegionKind::SigmaMinusTheta: return "SigmaMinusTheta";
        case RegionKind::SigmaTheta: return "SigmaTheta";
        case RegionKind::D0: return "D0";
        case RegionKind::QlOrQr: return "QlOrQr";
        case RegionKind::Ta: return "Ta";
        case RegionKind::Tb: return "Tb";
        case RegionKind::DeltaA: return "DeltaA";
        case RegionKind::DeltaB: return "DeltaB";
    }
    return "unknown";
}

std::optional<RegionKind> region_kind_from_name(const std::string& name) {
    static const std::pair<const char*, RegionKind> kNames[] = {
        {"SigmaMinusTheta", RegionKind::SigmaMinusTheta},
        {"SigmaTheta", RegionKind::SigmaTheta},
        {"D0", RegionKind::D0},
        {"QlOrQr", RegionKind::QlOrQr},
        {"Ta", RegionKind::Ta},
        {"Tb", RegionKind::Tb},
        {"DeltaA", RegionKind::DeltaA},
        {"DeltaB", RegionKind::DeltaB},
    };
    for (const auto& [n, k] : kNames) {
        if (name == n) return k;
    }
    return std::nullopt;
}

std::pair<double, double> solve_spacings(const Params& p) {
    const Lattice& lat = p.lattice;
    const double te = p.tau_eps();
    const double s = p.sin_theta;

    if (lat.degenerate) {
        // Single-strip variant: one family of dislocations along e1, and the
        // rank-one condition against the R_theta grain fixes the spacing.
        const double r = te / (4.0 * s);
        if (2.0 * r > p.L - p.l) {
            throw validation_error("solve_spacings: strip does not fit, domain too small (increase theta or L)");
        }
        return {r, r};
    }

    const double sd = std::sin(lat.phi - lat.eta);
    const double sphi = std::sin(lat.phi);
    const double seta = std::sin(lat.eta);
    const double r1 = -(te / 4.0) * sd / (s * seta);
    const double r2 = (te / 4.0) * sd / (s * sphi);
    if (!(r1 > 0.0) || !(r2 > 0.0)) {
        throw validation_error("solve_spacings: nonpositive spacing, generator sign conditions violated");
    }
    if (2.0 * r1 > p.L - p.l || 2.0 * r2 > p.L - p.l) {
        std::ostringstream msg;
        msg << "solve_spacings: strips do not fit in the domain (2*r_bar = " << 2.0 * std::max(r1, r2)
            << " > L - l = " << p.L - p.l << ")";
        throw validation_error(msg.str());
    }
    return {r1, r2};
}

std::pair<int, double> snap_dyadic(double r_bar, const Params& p) {
    const double le = p.lambda_eps();
    if (r_bar < 2.0 * le) {
        // r_bar scales like 1/sin(theta), so r_bar * sin(theta) is invariant
        // and the largest admissible angle follows directly.
        const double s_max = r_bar * p.sin_theta / (2.0 * le);
        std::ostringstream msg;
        msg << "snap_dyadic: theta too large, no dyadic annulus fits (r_bar = " << r_bar
            << " < 2*lambda*eps = " << 2.0 * le << "); requires sin(theta) < " << s_max;
        throw validation_error(msg.str());
    }
    const long n = std::lround(std::log2(r_bar / le));
    const int n_bar = static_cast<int>(std::max(1L, n));
    const double r0 = std::ldexp(r_bar, -n_bar);
    return {n_bar, r0};
}

StripLayout build_layout(const Params& p) {
    StripLayout layout;
    const auto [r1, r2] = solve_spacings(p);
    layout.r_bar[0] = r1;
    layout.r_bar[1] = r2;
    layout.single_strip = p.lattice.degenerate;
    for (int i = 0; i < 2; ++i) {
        const auto [n_bar, r0] = snap_dyadic(layout.r_bar[i], p);
        layout.n_bar[i] = n_bar;
        layout.r0[i] = r0;
        layout.N[i] = static_cast<long>(std::ceil(p.L / layout.r_bar[i]));
    }
    if (layout.single_strip) layout.N[1] = 0;
    return layout;
}

namespace {

// Mirror factor (-1)^(i+1): +1 for strip 1 (fan opens to +x in square
// coordinates), -1 for strip 2.
double mirror_of(int strip) { return strip == 1 ? 1.0 : -1.0; }

Vec2 square_center(int strip, long k, const StripLayout& layout) {
    const double ell = layout.r_bar[strip - 1];
    return {-mirror_of(strip) * ell, -(2.0 * static_cast<double>(k) - 1.0) * ell};
}

Polygon rect_polygon(double x0, double y0, double x1, double y1) {
    return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Polygon region_polygon(const RegionDescriptor& r, const Params& p, const StripLayout& layout) {
    if (r.kind == RegionKind::SigmaMinusTheta) {
        return rect_polygon(-p.L, -2.0 * p.L, -2.0 * layout.r_bar[0], 0.0);
    }
    if (r.kind == RegionKind::SigmaTheta) {
        const double x0 = layout.single_strip ? 0.0 : 2.0 * layout.r_bar[1];
        return rect_polygon(x0, -2.0 * p.L, p.L, 0.0);
    }

    const int i = r.strip;
    const double mx = mirror_of(i);
    const double ell = layout.r_bar[i - 1];
    const double r0 = layout.r0[i - 1];
    const Vec2 t = square_center(i, r.square, layout);
    std::vector<Vec2> v;
    switch (r.kind) {
        case RegionKind::D0:
            v = {{-r0, -r0}, {r0, -r0}, {r0, r0}, {-r0, r0}};
            break;
        case RegionKind::QlOrQr:
            // Half of the square on the far side of the fan, notched by D0.
            v = {{-mx * ell, -ell}, {0.0, -ell},   {0.0, -r0}, {-mx * r0, -r0},
                 {-mx * r0, r0},    {0.0, r0},     {0.0, ell}, {-mx * ell, ell}};
            break;
        case RegionKind::Ta:
            v = {{0.0, r0}, {mx * r0, r0}, {mx * ell, ell}, {0.0, ell}};
            break;
        case RegionKind::Tb:
            v = {{0.0, -r0}, {mx * r0, -r0}, {mx * ell, -ell}, {0.0, -ell}};
            break;
        case RegionKind::DeltaA: {
            const double rp = layout.r_n(i - 1, r.annulus - 1);
            const double rn = layout.r_n(i - 1, r.annulus);
            v = {{mx * rp, -rp}, {mx * rn, rn}, {mx * rp, rp}};
            break;
        }
        case RegionKind::DeltaB: {
            const double rp = layout.r_n(i - 1, r.annulus - 1);
            const double rn = layout.r_n(i - 1, r.annulus);
            v = {{mx * rn, rn}, {mx * rn, -rn}, {mx * rp, -rp}};
            break;
        }
        default:
            throw validation_error("region_polygon: unexpected region kind");
    }
    for (Vec2& q : v) q += t;
    return Polygon(std::move(v));
}

}  // namespace

std::vector<Cell> build_partition(const Params& p, const StripLayout& layout) {
    const Rect domain = p.domain();
    const double tol = p.tolerance();
    std::vector<Cell> cells;

    auto emit = [&](const RegionDescriptor& region) {
        Polygon poly = region_polygon(region, p, layout);
        const double full_area = std::fabs(poly.signed_area());
        std::optional<Polygon> clipped = clip_to_rect(poly, domain, tol);
        if (!clipped) return;  // entirely outside, or a zero-area sliver
        Cell cell;
        cell.polygon = std::move(*clipped);
        cell.region = region;
        cell.unclipped_area = full_area;
        cells.push_back(std::move(cell));
    };

    emit({RegionKind::SigmaMinusTheta, 0, 0, 0});
    emit({RegionKind::SigmaTheta, 0, 0, 0});

    const int strips = layout.single_strip ? 1 : 2;
    for (int i = 1; i <= strips; ++i) {
        for (long k = 1; k <= layout.N[i - 1]; ++k) {
            emit({RegionKind::D0, i, k, 0});
            emit({RegionKind::QlOrQr, i, k, 0});
            emit({RegionKind::Ta, i, k, 0});
            emit({RegionKind::Tb, i, k, 0});
            for (int n = 1; n <= layout.n_bar[i - 1]; ++n) {
                emit({RegionKind::DeltaA, i, k, n});
                emit({RegionKind::DeltaB, i, k, n});
            }
        }
    }
    return cells;
}

Mat2 interpolation_gradient(const Vec2& p1, const Vec2& p2, const Vec2& p3, const Vec2& v1,
                            const Vec2& v2, const Vec2& v3) {
    const Vec2 c1 = p2 - p1;
    const Vec2 c2 = p3 - p1;
    const double det = c1.x * c2.y - c2.x * c1.y;
    const Rect span{{std::min({p1.x, p2.x, p3.x}), std::min({p1.y, p2.y, p3.y})},
                    {std::max({p1.x, p2.x, p3.x}), std::max({p1.y, p2.y, p3.y})}};
    const double scale2 = (span.hi - span.lo).norm2();
    if (std::fabs(det) <= 1e-14 * scale2) {
        throw validation_error("interpolation_gradient: degenerate simplex");
    }
    // P = (p2-p1, p3-p1); gradient = (1/det) [ v1 (P21-P22, P12-P11)^T
    //                                        + v2 (P22, -P12)^T + v3 (-P21, P11)^T ].
    const double P11 = c1.x, P21 = c1.y, P12 = c2.x, P22 = c2.y;
    Mat2 g = Mat2::outer(v1, {P21 - P22, P12 - P11}) + Mat2::outer(v2, {P22, -P12}) +
             Mat2::outer(v3, {-P21, P11});
    return g * (1.0 / det);
}

std::optional<AffineMap> affine_for_region(const RegionDescriptor& region, const Params& p,
                                           const StripLayout& layout) {
    const double s = p.sin_theta;
    const double c = p.cos_theta();
    const Mat2 rot_minus = Mat2::rotation_cs(c, -s);
    const Mat2 rot_plus = Mat2::rotation_cs(c, s);

    switch (region.kind) {
        case RegionKind::SigmaMinusTheta:
            return AffineMap{rot_minus, {0.0, 0.0}};
        case RegionKind::SigmaTheta:
            return AffineMap{rot_plus, {0.0, 0.0}};
        case RegionKind::D0:
            return std::nullopt;
        default:
            break;
    }

    const int i = region.strip;
    const double mx = mirror_of(i);
    const Mat2 rot = (i == 1) ? rot_minus : rot_plus;
    const Vec2 b = p.lattice.degenerate ? Vec2{1.0, 0.0} : (i == 1 ? p.lattice.b1 : p.lattice.b2);
    const Vec2 burgers = b * (mx * p.tau_eps());
    const double k = static_cast<double>(region.square);

    switch (region.kind) {
        case RegionKind::QlOrQr:
            return AffineMap{rot, {0.0, 0.0}};
        case RegionKind::Ta:
            return AffineMap{rot, burgers * k};
        case RegionKind::Tb:
            return AffineMap{rot, burgers * (k + 1.0)};
        case RegionKind::DeltaA: {
            const double rp = layout.r_n(i - 1, region.annulus - 1);
            const double rn = layout.r_n(i - 1, region.annulus);
            const Vec2 p1{mx * rp, -rp};
            const Vec2 p2{mx * rn, rn};
            const Vec2 p3{mx * rp, rp};
            // Values are R_i x + (k+1 | k | k) * burgers. Interpolating only
            // the offsets relative to the common affine part, and in square
            // coordinates, keeps the gradient free of large cancellations and
            // bit-identical across k.
            const Mat2 grad = interpolation_gradient(p1, p2, p3, burgers, {0.0, 0.0}, {0.0, 0.0});
            const Mat2 A = rot + grad;
            const Vec2 p1_abs = p1 + square_center(i, region.square, layout);
            const Vec2 cvec = burgers * (k + 1.0) - grad.apply(p1_abs);
            return AffineMap{A, cvec};
        }
        case RegionKind::DeltaB: {
            const double rp = layout.r_n(i - 1, region.annulus - 1);
            const double rn = layout.r_n(i - 1, region.annulus);
            const Vec2 p1{mx * rp, -rp};
            const Vec2 p2{mx * rn, -rn};
            const Vec2 p3{mx * rn, rn};
            // Values are R_i x + (k+1 | k+1 | k) * burgers.
            const Mat2 grad =
                interpolation_gradient(p1, p2, p3, {0.0, 0.0}, {0.0, 0.0}, -1.0 * burgers);
            const Mat2 A = rot + grad;
            const Vec2 p1_abs = p1 + square_center(i, region.square, layout);
            const Vec2 cvec = burgers * (k + 1.0) - grad.apply(p1_abs);
            return AffineMap{A, cvec};
        }
        default:
            throw validation_error("affine_for_region: unknown region kind");
    }
}

StrainField build_strain_field(const Params& p) {
    p.validate();
    Params normalized = p;
    normalized.lattice = normalize_generators(p.lattice);

    StrainField field;
    field.params = normalized;
    field.layout = build_layout(normalized);
    field.cells = build_partition(normalized, field.layout);

    for (Cell& cell : field.cells) {
        cell.affine = affine_for_region(cell.region, normalized, field.layout);
        cell.strain = cell.affine ? cell.affine->A : Mat2::identity();
    }

    const int strips = field.layout.single_strip ? 1 : 2;
    for (int i = 1; i <= strips; ++i) {
        for (long k = 1; k <= field.layout.N[i - 1]; ++k) {
            CoreSite core;
            core.center = square_center(i, k, field.layout);
            core.half_side = field.layout.r0[i - 1];
            core.strip = i;
            core.square = k;
            field.cores.push_back(core);
        }
    }
    return field;
}

Vec2 StrainField::burgers_dir(int strip) const {
    if (params.lattice.degenerate) return {1.0, 0.0};
    return strip == 1 ? params.lattice.b1 : params.lattice.b2;
}

Mat2 StrainField::strip_rotation(int strip) const {
    const double s = params.sin_theta;
    const double c = params.cos_theta();
    return strip == 1 ? Mat2::rotation_cs(c, -s) : Mat2::rotation_cs(c, s);
}

CellLocator::CellLocator(const StrainField& field) : field_(&field) {
    squares_[0].resize(static_cast<std::size_t>(field.layout.N[0]));
    squares_[1].resize(static_cast<std::size_t>(field.layout.N[1]));
    for (long idx = 0; idx < static_cast<long>(field.cells.size()); ++idx) {
        const RegionDescriptor& r = field.cells[static_cast<std::size_t>(idx)].region;
        if (r.in_strip()) {
            squares_[r.strip - 1][static_cast<std::size_t>(r.square - 1)].push_back(idx);
        } else {
            outer_.push_back(idx);
        }
    }
}

const std::vector<long>& CellLocator::square_cells(int strip, long k) const {
    return squares_[strip][static_cast<std::size_t>(k)];
}

long CellLocator::locate(const Vec2& p) const {
    const StrainField& f = *field_;
    const double tol = f.params.tolerance();
    auto try_cells = [&](const std::vector<long>& ids) -> long {
        for (long id : ids) {
            if (f.cells[static_cast<std::size_t>(id)].polygon.contains(p, tol)) return id;
        }
        return -1;
    };

    for (int strip = 0; strip < 2; ++strip) {
        if (squares_[strip].empty()) continue;
        const double ell = f.layout.r_bar[strip];
        const double xlo = strip == 0 ? -2.0 * ell : 0.0;
        const double xhi = strip == 0 ? 0.0 : 2.0 * ell;
        if (p.x < xlo - tol || p.x > xhi + tol) continue;
        const long guess = static_cast<long>(std::floor(-p.y / (2.0 * ell))) + 1;
        for (long k = std::max(1L, guess - 1); k <= std::min<long>(f.layout.N[strip], guess + 1); ++k) {
            const long hit = try_cells(squares_[strip][static_cast<std::size_t>(k - 1)]);
            if (hit >= 0) return hit;
        }
    }
    return try_cells(outer_);
}

std::vector<long> CellLocator::candidates(const Rect& bb) const {
    const StrainField& f = *field_;
    const double tol = f.params.tolerance();
    std::vector<long> out;
    for (int strip = 0; strip < 2; ++strip) {
        if (squares_[strip].empty()) continue;
        const double ell = f.layout.r_bar[strip];
        const double xlo = strip == 0 ? -2.0 * ell : 0.0;
        const double xhi = strip == 0 ? 0.0 : 2.0 * ell;
        if (bb.hi.x < xlo - tol || bb.lo.x > xhi + tol) continue;
        const long klo = std::max(1L, static_cast<long>(std::floor(-bb.hi.y / (2.0 * ell))));
        const long khi = std::min<long>(f.layout.N[strip],
                                        static_cast<long>(std::floor(-bb.lo.y / (2.0 * ell))) + 2);
        for (long k = klo; k <= khi; ++k) {
            const auto& ids = squares_[strip][static_cast<std::size_t>(k - 1)];
            out.insert(out.end(), ids.begin(), ids.end());
        }
    }
    out.insert(out.end(), outer_.begin(), outer_.end());
    return out;
}

}  // namespace gb
