#include "gb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gb/errors.hpp"
#include "gb/rng.hpp"

namespace gb {

namespace {

bool bboxes_touch(const Rect& a, const Rect& b, double tol) {
    return a.lo.x <= b.hi.x + tol && b.lo.x <= a.hi.x + tol && a.lo.y <= b.hi.y + tol &&
           b.lo.y <= a.hi.y + tol;
}

// Unordered pairs of cells that can share boundary, exploiting the
// strip/square structure: cells meet only within a square, across vertically
// adjacent squares, across the strip interface, or against the outer regions.
std::vector<std::pair<long, long>> adjacent_cell_pairs(const StrainField& f, const CellLocator& loc) {
    std::vector<std::pair<long, long>> pairs;
    const long n1 = f.layout.N[0];
    const long n2 = f.layout.N[1];
    const double ell1 = f.layout.r_bar[0];
    const double ell2 = f.layout.r_bar[1];

    auto pair_lists = [&](const std::vector<long>& a, const std::vector<long>& b) {
        for (long i : a) {
            for (long j : b) pairs.emplace_back(std::min(i, j), std::max(i, j));
        }
    };
    auto pair_within = [&](const std::vector<long>& a) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = i + 1; j < a.size(); ++j) pairs.emplace_back(a[i], a[j]);
        }
    };

    for (int strip = 0; strip < 2; ++strip) {
        const long n = strip == 0 ? n1 : n2;
        for (long k = 1; k <= n; ++k) {
            const auto& cells = loc.square_cells(strip, k - 1);
            pair_within(cells);
            if (k < n) pair_lists(cells, loc.square_cells(strip, k));
            pair_lists(cells, loc.outer_cells());
        }
    }
    // Across the strip interface, squares with overlapping vertical extent.
    for (long k = 1; k <= n1 && n2 > 0; ++k) {
        const double ytop = -2.0 * static_cast<double>(k - 1) * ell1;
        const double ybot = -2.0 * static_cast<double>(k) * ell1;
        const long klo = std::max(1L, static_cast<long>(std::floor(-ytop / (2.0 * ell2))));
        const long khi = std::min(n2, static_cast<long>(std::ceil(-ybot / (2.0 * ell2))) + 1);
        for (long kk = klo; kk <= khi; ++kk) {
            pair_lists(loc.square_cells(0, k - 1), loc.square_cells(1, kk - 1));
        }
    }
    return pairs;
}

bool segment_on_core_boundary(const StrainField& f, const Segment& s, const RegionDescriptor& a,
                              const RegionDescriptor& b, double tol) {
    auto on_core_of = [&](int strip, long square) {
        if (strip == 0 || square <= 0) return false;
        // Core sites are ordered strip 1 first, one per square.
        const long base = strip == 1 ? 0 : f.layout.N[0];
        const long idx = base + square - 1;
        if (idx < 0 || idx >= static_cast<long>(f.cores.size())) return false;
        const CoreSite& core = f.cores[static_cast<std::size_t>(idx)];
        return distance_to_square_boundary(s.a, core.center, core.half_side) <= tol &&
               distance_to_square_boundary(s.b, core.center, core.half_side) <= tol &&
               distance_to_square_boundary(s.midpoint(), core.center, core.half_side) <= tol;
    };
    return on_core_of(a.strip, a.square) || on_core_of(b.strip, b.square);
}

}  // namespace

std::vector<InterfaceJump> interface_jumps(const StrainField& f) {
    const CellLocator loc(f);
    const double tol = f.params.tolerance();
    std::vector<InterfaceJump> jumps;
    for (const auto& [i, j] : adjacent_cell_pairs(f, loc)) {
        const Cell& ci = f.cells[static_cast<std::size_t>(i)];
        const Cell& cj = f.cells[static_cast<std::size_t>(j)];
        if (!bboxes_touch(ci.polygon.bbox(), cj.polygon.bbox(), tol)) continue;
        for (const Segment& s : shared_edge_overlaps(ci.polygon, cj.polygon, tol)) {
            InterfaceJump jump;
            jump.edge = s;
            jump.left_cell = i;
            jump.right_cell = j;
            jump.left_region = ci.region;
            jump.right_region = cj.region;
            const Vec2 t = s.direction() / s.length();
            jump.jump_tangential = (ci.strain - cj.strain).apply(t);
            jump.on_core_boundary = segment_on_core_boundary(f, s, ci.region, cj.region, tol);
            jumps.push_back(jump);
        }
    }
    return jumps;
}

std::pair<bool, double> check_h1(const StrainField& f, double rel_tol) {
    double max_strain = 0.0;
    for (const Cell& c : f.cells) max_strain = std::max(max_strain, c.strain.frobenius());
    double worst = 0.0;
    for (const InterfaceJump& j : interface_jumps(f)) {
        if (j.on_core_boundary) continue;
        worst = std::max(worst, j.jump_tangential.norm());
    }
    return {worst <= rel_tol * max_strain, worst};
}

namespace {

double segment_to_square_boundary_distance(const Segment& s, const Vec2& center, double r0) {
    // Minimum over the four sides; a segment strictly inside the square has
    // positive distance here even though it meets the solid square.
    double lo = distance_to_square_boundary(s.a, center, r0);
    lo = std::min(lo, distance_to_square_boundary(s.b, center, r0));
    const double region = segment_to_square_distance(s, center, r0);
    if (region > 0.0) return std::min(lo, region);
    return lo;  // endpoint distances bound the boundary distance when crossing
}

void validate_loop(const StrainField& f, const std::vector<Vec2>& loop) {
    const double tol = f.params.tolerance();
    if (loop.size() < 4) throw validation_error("circulation: loop needs at least 3 distinct vertices");
    if ((loop.front() - loop.back()).norm() > tol) {
        throw validation_error("circulation: open polyline (first vertex must be repeated last)");
    }
    const double te = f.params.tau_eps();
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
        const Segment seg{loop[i], loop[i + 1]};
        for (const CoreSite& core : f.cores) {
            if (f.params.strict_loops) {
                const double d = segment_to_square_distance(seg, core.center, core.half_side);
                if (d < core.half_side * (1.0 - 1e-9)) {
                    throw validation_error("circulation: loop enters a core neighbourhood");
                }
            } else {
                const double d = segment_to_square_boundary_distance(seg, core.center, core.half_side);
                if (d <= 1e-12 * te) {
                    throw validation_error("circulation: loop touches a core boundary");
                }
            }
        }
    }
}

}  // namespace

Vec2 circulation(const StrainField& f, const CellLocator& locator, const std::vector<Vec2>& loop) {
    validate_loop(f, loop);
    const double tol = f.params.tolerance();
    Vec2 total{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
        const Segment seg{loop[i], loop[i + 1]};
        const Vec2 d = seg.direction();
        const double len = d.norm();
        if (len <= tol) continue;

        Rect bb{{std::min(seg.a.x, seg.b.x), std::min(seg.a.y, seg.b.y)},
                {std::max(seg.a.x, seg.b.x), std::max(seg.a.y, seg.b.y)}};
        std::vector<double> ts = {0.0, 1.0};
        for (long id : locator.candidates(bb)) {
            const Polygon& poly = f.cells[static_cast<std::size_t>(id)].polygon;
            if (!bboxes_touch(poly.bbox(), bb, tol)) continue;
            for (std::size_t e = 0; e < poly.size(); ++e) {
                if (auto t = segment_line_intersection(seg, poly.edge(e), tol)) ts.push_back(*t);
            }
        }
        std::sort(ts.begin(), ts.end());
        const double t_eps = tol / len;
        for (std::size_t a = 0; a + 1 < ts.size(); ++a) {
            const double t0 = ts[a];
            const double t1 = ts[a + 1];
            if (t1 - t0 <= t_eps) continue;
            const Vec2 mid = seg.a + d * ((t0 + t1) / 2.0);
            const long id = locator.locate(mid);
            if (id < 0) {
                throw validation_error("circulation: loop leaves the cell complex");
            }
            total += f.cells[static_cast<std::size_t>(id)].strain.apply(d * (t1 - t0));
        }
    }
    return total;
}

Vec2 circulation(const StrainField& f, const std::vector<Vec2>& loop) {
    const CellLocator locator(f);
    return circulation(f, locator, loop);
}

namespace {

std::vector<Vec2> ccw_rectangle_loop(double x0, double y0, double x1, double y1) {
    return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}};
}

}  // namespace

H2Result check_h2(const StrainField& f, int n_random_loops, std::uint64_t seed) {
    H2Result result;
    result.ok = true;
    const CellLocator locator(f);
    const double te = f.params.tau_eps();
    const double tol_core = 1e-9 * te;
    const Rect domain = f.params.domain();
    const double tol = f.params.tolerance();

    for (long i = 0; i < static_cast<long>(f.cores.size()); ++i) {
        const CoreSite& core = f.cores[static_cast<std::size_t>(i)];
        CoreCirculation cc;
        cc.core_index = i;
        const double rho = 2.0 * core.half_side;  // first full dyadic frame
        const Rect loop_bb{{core.center.x - rho, core.center.y - rho},
                           {core.center.x + rho, core.center.y + rho}};
        if (loop_bb.lo.y < domain.lo.y - tol || loop_bb.hi.y > domain.hi.y + tol) {
            cc.skipped = true;  // clipped by the domain, no admissible encircling curve
            result.cores.push_back(cc);
            continue;
        }
        const Vec2 value = circulation(
            f, locator,
            ccw_rectangle_loop(loop_bb.lo.x, loop_bb.lo.y, loop_bb.hi.x, loop_bb.hi.y));
        cc.value = value;
        const Vec2 expected = f.burgers_dir(core.strip) * (-te);
        cc.ok = (value - expected).norm() <= tol_core;
        if (auto coords = coords_in_lattice(value, f.params.lattice, te, tol_core)) {
            cc.m = coords->first;
            cc.n = coords->second;
        } else {
            cc.ok = false;
        }
        result.cores.push_back(cc);
        if (!cc.ok) result.ok = false;
    }

    // Random rectilinear loops: circulation must equal minus the sum of the
    // enclosed cores' Burgers vectors.
    const double margin = 0.05 * f.params.L;
    for (int li = 0; li < n_random_loops; ++li) {
        Rng rng(mix_key(seed, 0x6c6f6f70ULL, static_cast<std::uint64_t>(li)));
        bool placed = false;
        Rect r{};
        for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
            double x0 = rng.uniform(domain.lo.x + margin, domain.hi.x - margin);
            double x1 = rng.uniform(domain.lo.x + margin, domain.hi.x - margin);
            double y0 = rng.uniform(domain.lo.y + margin, domain.hi.y - margin);
            double y1 = rng.uniform(domain.lo.y + margin, domain.hi.y - margin);
            if (x0 > x1) std::swap(x0, x1);
            if (y0 > y1) std::swap(y0, y1);
            if (x1 - x0 < 0.1 * f.params.L || y1 - y0 < 0.1 * f.params.L) continue;
            r = Rect{{x0, y0}, {x1, y1}};
            placed = true;
            const Segment sides[4] = {{{x0, y0}, {x1, y0}},
                                      {{x1, y0}, {x1, y1}},
                                      {{x1, y1}, {x0, y1}},
                                      {{x0, y1}, {x0, y0}}};
            for (const CoreSite& core : f.cores) {
                for (const Segment& s : sides) {
                    if (segment_to_square_distance(s, core.center, core.half_side) <
                        1.05 * core.half_side) {
                        placed = false;
                        break;
                    }
                }
                if (!placed) break;
            }
        }
        if (!placed) continue;

        LoopCheck lc;
        lc.value = circulation(f, locator, ccw_rectangle_loop(r.lo.x, r.lo.y, r.hi.x, r.hi.y));
        long e1 = 0, e2 = 0;
        for (const CoreSite& core : f.cores) {
            if (core.center.x > r.lo.x && core.center.x < r.hi.x && core.center.y > r.lo.y &&
                core.center.y < r.hi.y) {
                lc.enclosed_cores++;
                const auto bc = nearest_lattice_coords(f.burgers_dir(core.strip), f.params.lattice, 1.0);
                e1 -= bc.first;
                e2 -= bc.second;
            }
        }
        lc.expected_m = e1;
        lc.expected_n = e2;
        const double perim = 2.0 * (r.width() + r.height());
        const double tol_loop = 1e-9 * te * std::max(1.0, perim / te);
        if (auto coords = coords_in_lattice(lc.value, f.params.lattice, te, tol_loop)) {
            lc.coords_found = true;
            lc.m = coords->first;
            lc.n = coords->second;
            lc.ok = (lc.m == lc.expected_m && lc.n == lc.expected_n);
        }
        if (!lc.ok) result.ok = false;
        result.loops.push_back(lc);
    }
    return result;
}

bool check_h3(const StrainField& f, double tol) {
    const Params& p = f.params;
    const double gtol = p.tolerance();
    const Rect left{{-p.L, -2.0 * p.L}, {-p.L + p.l, 0.0}};
    const Rect right{{p.L - p.l, -2.0 * p.L}, {p.L, 0.0}};
    const Mat2 rot_minus = f.strip_rotation(1);
    const Mat2 rot_plus = f.strip_rotation(2);

    for (const Cell& c : f.cells) {
        for (int side = 0; side < 2; ++side) {
            const Rect& r = side == 0 ? left : right;
            const Mat2& expected = side == 0 ? rot_minus : rot_plus;
            if (!bboxes_touch(c.polygon.bbox(), r, gtol)) continue;
            const auto overlap = clip_to_rect(c.polygon, r, gtol);
            if (!overlap) continue;
            if ((c.strain - expected).max_abs() > tol) return false;
        }
    }
    return true;
}

double deformation_continuity(const StrainField& f) {
    const CellLocator loc(f);
    const double tol = f.params.tolerance();
    const double te = f.params.tau_eps();
    double worst = 0.0;
    for (const auto& [i, j] : adjacent_cell_pairs(f, loc)) {
        const Cell& ci = f.cells[static_cast<std::size_t>(i)];
        const Cell& cj = f.cells[static_cast<std::size_t>(j)];
        if (!ci.affine || !cj.affine) continue;
        if (!bboxes_touch(ci.polygon.bbox(), cj.polygon.bbox(), tol)) continue;
        for (const Segment& s : shared_edge_overlaps(ci.polygon, cj.polygon, tol)) {
            const Vec2 ja = (*ci.affine)(s.a) - (*cj.affine)(s.a);
            const Vec2 jb = (*ci.affine)(s.b) - (*cj.affine)(s.b);
            // Remove the nearest lattice translation: slip by a vector of
            // tau eps B maps the crystal to itself.
            const auto [m, n] = nearest_lattice_coords(ja + (jb - ja) * 0.5, f.params.lattice, te);
            const Vec2 lattice_part = f.params.lattice.point(m, n) * te;
            worst = std::max(worst, (ja - lattice_part).norm());
            worst = std::max(worst, (jb - lattice_part).norm());
        }
    }
    return worst;
}

AdmissibilityReport run_admissibility(const StrainField& f, const CheckOptions& opts) {
    AdmissibilityReport report;
    for (const Cell& c : f.cells) {
        report.max_strain_norm = std::max(report.max_strain_norm, c.strain.frobenius());
    }

    const auto [h1_ok, worst_jump] = check_h1(f, opts.h1_rel_tol);
    report.h1_ok = h1_ok;
    report.max_offcore_jump = worst_jump;
    if (!h1_ok) {
        std::ostringstream msg;
        msg << "H1: off-core tangential jump " << worst_jump << " exceeds "
            << opts.h1_rel_tol * report.max_strain_norm;
        report.violations.push_back(msg.str());
    }

    report.h2 = check_h2(f, opts.n_random_loops, opts.seed);
    report.h2_ok = report.h2.ok;
    if (!report.h2_ok) {
        for (const CoreCirculation& cc : report.h2.cores) {
            if (!cc.skipped && !cc.ok) {
                std::ostringstream msg;
                msg << "H2: core " << cc.core_index << " circulation (" << cc.value.x << ", "
                    << cc.value.y << ") is not -tau*eps*b_i";
                report.violations.push_back(msg.str());
            }
        }
        for (std::size_t i = 0; i < report.h2.loops.size(); ++i) {
            const LoopCheck& lc = report.h2.loops[i];
            if (!lc.ok) {
                std::ostringstream msg;
                msg << "H2: loop " << i << " coords ";
                if (lc.coords_found) {
                    msg << "(" << lc.m << ", " << lc.n << ")";
                } else {
                    msg << "(none)";
                }
                msg << " expected (" << lc.expected_m << ", " << lc.expected_n << ")";
                report.violations.push_back(msg.str());
            }
        }
    }

    report.h3_ok = check_h3(f, opts.h3_tol);
    if (!report.h3_ok) {
        report.violations.push_back("H3: a cell in a boundary strip does not carry R_{\\pm theta}");
    }

    report.deformation_mismatch = deformation_continuity(f);
    report.continuity_ok =
        report.deformation_mismatch <= opts.continuity_rel_tol * f.params.tau_eps();
    if (!report.continuity_ok) {
        std::ostringstream msg;
        msg << "continuity: deformation mismatch " << report.deformation_mismatch << " exceeds "
            << opts.continuity_rel_tol * f.params.tau_eps();
        report.violations.push_back(msg.str());
    }
    return report;
}

}  // namespace gb
