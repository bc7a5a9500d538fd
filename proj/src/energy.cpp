#include "gb/energy.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gb/errors.hpp"
#include "gb/rng.hpp"

namespace gb {

double dist2_so2(const Mat2& F) {
    const double s = F.frobenius2();
    const double d = F.det();
    const double val = s + 2.0 - 2.0 * std::sqrt(std::max(0.0, s + 2.0 * d));
    return std::max(0.0, val);
}

namespace {

// Fraction of uniformly sampled polygon points lying in the band of radius
// rho around the boundary of the square of half-side r0 at the origin. The
// polygon is given in core-centred coordinates and must be convex.
double band_fraction(const Polygon& poly, double r0, double rho, int samples, std::uint64_t key) {
    const auto& v = poly.vertices();
    const std::size_t ntri = v.size() - 2;
    std::vector<double> areas(ntri);
    double total_area = 0.0;
    for (std::size_t t = 0; t < ntri; ++t) {
        areas[t] = 0.5 * std::fabs((v[t + 1] - v[0]).cross(v[t + 2] - v[0]));
        total_area += areas[t];
    }
    if (total_area <= 0.0) return 0.0;

    // Allocate samples proportionally to triangle area (largest remainder).
    std::vector<int> alloc(ntri, 0);
    std::vector<std::pair<double, std::size_t>> rema(ntri);
    int assigned = 0;
    for (std::size_t t = 0; t < ntri; ++t) {
        const double want = samples * areas[t] / total_area;
        alloc[t] = static_cast<int>(want);
        assigned += alloc[t];
        rema[t] = {want - alloc[t], t};
    }
    std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t r = 0; assigned < samples; ++r, ++assigned) alloc[rema[r % ntri].second]++;

    long hits = 0;
    for (std::size_t t = 0; t < ntri; ++t) {
        Rng rng(mix_key(key, 0x7a1bULL, static_cast<std::uint64_t>(t)));
        const Vec2 a = v[0];
        const Vec2 ab = v[t + 1] - v[0];
        const Vec2 ac = v[t + 2] - v[0];
        for (int i = 0; i < alloc[t]; ++i) {
            double u1 = rng.uniform01();
            double u2 = rng.uniform01();
            if (u1 + u2 > 1.0) {
                u1 = 1.0 - u1;
                u2 = 1.0 - u2;
            }
            const Vec2 x = a + ab * u1 + ac * u2;
            if (distance_to_square_boundary(x, {0.0, 0.0}, r0) <= rho) hits++;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

Polygon translated(const Polygon& p, const Vec2& shift) {
    std::vector<Vec2> v(p.vertices());
    for (Vec2& q : v) q += shift;
    return Polygon(std::move(v));
}

// Canonical fan cell of the first dyadic frame in core-centred coordinates.
Polygon canonical_inner_fan(int strip, RegionKind kind, const StripLayout& layout) {
    const double mx = strip == 1 ? 1.0 : -1.0;
    const double r0 = layout.r0[strip - 1];
    const double r1 = 2.0 * r0;
    if (kind == RegionKind::DeltaA) {
        return Polygon({{mx * r0, -r0}, {mx * r1, r1}, {mx * r0, r0}});
    }
    return Polygon({{mx * r1, r1}, {mx * r1, -r1}, {mx * r0, -r0}});
}

}  // namespace

double elastic_energy(const StrainField& f) {
    const Params& p = f.params;
    const StripLayout& layout = f.layout;
    // Band-overlap fraction of the two inner fan cells, per strip; identical
    // for every square of a strip by translation invariance.
    std::map<std::pair<int, int>, double> interior_fraction;
    auto interior_frac = [&](int strip, RegionKind kind) {
        const auto key = std::make_pair(strip, static_cast<int>(kind));
        auto it = interior_fraction.find(key);
        if (it != interior_fraction.end()) return it->second;
        const Polygon poly = canonical_inner_fan(strip, kind, layout);
        const double frac =
            band_fraction(poly, layout.r0[strip - 1], layout.r0[strip - 1], p.mc_samples,
                          mix_key(p.seed, 0xe1a5ULL, static_cast<std::uint64_t>(strip),
                                  static_cast<std::uint64_t>(kind)));
        interior_fraction.emplace(key, frac);
        return frac;
    };

    double total = 0.0;
    for (const Cell& cell : f.cells) {
        if (cell.region.kind != RegionKind::DeltaA && cell.region.kind != RegionKind::DeltaB) {
            continue;  // rotations and the identity core carry no elastic energy
        }
        const double d2 = dist2_so2(cell.strain);
        const int strip = cell.region.strip;
        const double r0 = layout.r0[strip - 1];
        const long base = strip == 1 ? 0 : layout.N[0];
        const CoreSite& core = f.cores[static_cast<std::size_t>(base + cell.region.square - 1)];

        const double clipped_area = std::fabs(cell.polygon.signed_area());
        const bool is_clipped = clipped_area < cell.unclipped_area * (1.0 - 1e-12);
        const double area = p.unclipped_cores ? cell.unclipped_area : clipped_area;

        // Only cells overlapping the band need the Monte Carlo exclusion.
        const Rect bb = cell.polygon.bbox();
        const Rect band_bb{{core.center.x - 2.0 * r0, core.center.y - 2.0 * r0},
                           {core.center.x + 2.0 * r0, core.center.y + 2.0 * r0}};
        const double tol = p.tolerance();
        const bool near_band = bb.lo.x < band_bb.hi.x - tol && band_bb.lo.x < bb.hi.x - tol &&
                               bb.lo.y < band_bb.hi.y - tol && band_bb.lo.y < bb.hi.y - tol;
        double band_area = 0.0;
        if (near_band) {
            if (!is_clipped || p.unclipped_cores) {
                band_area = area * interior_frac(strip, cell.region.kind);
            } else {
                const double frac = band_fraction(
                    translated(cell.polygon, -1.0 * core.center), r0, r0, p.mc_samples,
                    mix_key(p.seed, 0xc11bULL, static_cast<std::uint64_t>(strip),
                            mix_key(static_cast<std::uint64_t>(cell.region.square),
                                    static_cast<std::uint64_t>(cell.region.kind))));
                band_area = clipped_area * frac;
            }
        }
        total += d2 * (area - band_area);
    }
    return total;
}

double core_energy(const StrainField& f) {
    const Params& p = f.params;
    const Rect domain = p.domain();
    const double tol = p.tolerance();
    double total = 0.0;
    for (std::size_t i = 0; i < f.cores.size(); ++i) {
        const CoreSite& core = f.cores[i];
        const double r0 = core.half_side;
        const double lambda_i = r0 / p.epsilon;
        const double prefactor = p.tau * p.tau / (lambda_i * lambda_i);
        const Rect band_bb{{core.center.x - 2.0 * r0, core.center.y - 2.0 * r0},
                           {core.center.x + 2.0 * r0, core.center.y + 2.0 * r0}};
        double area;
        const bool inside = band_bb.lo.x >= domain.lo.x - tol && band_bb.hi.x <= domain.hi.x + tol &&
                            band_bb.lo.y >= domain.lo.y - tol && band_bb.hi.y <= domain.hi.y + tol;
        if (p.unclipped_cores || inside) {
            area = square_band_area(r0, r0);
        } else {
            // Band partially outside the domain: seeded hit-or-miss over the
            // in-domain part of its bounding box.
            const Rect r{{std::max(band_bb.lo.x, domain.lo.x), std::max(band_bb.lo.y, domain.lo.y)},
                         {std::min(band_bb.hi.x, domain.hi.x), std::min(band_bb.hi.y, domain.hi.y)}};
            if (r.width() <= 0.0 || r.height() <= 0.0) {
                continue;
            }
            Rng rng(mix_key(p.seed, 0xc03eULL, static_cast<std::uint64_t>(i)));
            const int n = std::max(p.mc_samples, 20000);
            long hits = 0;
            for (int k = 0; k < n; ++k) {
                const Vec2 x{rng.uniform(r.lo.x, r.hi.x), rng.uniform(r.lo.y, r.hi.y)};
                if (distance_to_square_boundary(x, core.center, r0) <= r0) hits++;
            }
            area = r.area() * static_cast<double>(hits) / static_cast<double>(n);
        }
        total += prefactor * area;
    }
    return total;
}

PredictedConstants predicted_constants(const Params& p) {
    PredictedConstants out;
    Lattice lat = p.lattice;
    if (!lat.degenerate && !sign_conditions_hold(lat.phi, lat.eta)) {
        lat = normalize_generators(lat);
    }
    const double tau = p.tau;
    const double lambda = p.lambda;

    if (lat.degenerate) {
        out.E0 = tau;
        out.E1 = tau * std::log2(tau / (4.0 * lambda));
        out.A = 1.0 + std::log2(tau / (4.0 * lambda));
        // The horizontal-generator limit of the square-lattice constants.
        const double rel = std::remainder(lat.eta - lat.phi - 1.5 * M_PI, 2.0 * M_PI);
        if (std::fabs(rel) < 1e-9) out.A_RS = 1.0 + std::log2(tau / (2.0 * M_PI * lambda));
        return out;
    }

    const double sd = std::sin(lat.phi - lat.eta);
    const double sphi = std::sin(lat.phi);
    const double seta = std::sin(lat.eta);
    out.E0 = tau * (sphi - seta) / sd;
    out.E1 = tau * ((sphi / sd) * std::log2(tau * sd / (4.0 * lambda * sphi)) -
                    (seta / sd) * std::log2(-tau * sd / (4.0 * lambda * seta)));
    out.A = 1.0 + out.E1 / out.E0;

    const double rel = std::remainder(lat.eta - lat.phi - 1.5 * M_PI, 2.0 * M_PI);
    if (std::fabs(rel) < 1e-9) {
        const double c = std::cos(lat.phi);
        const double s = std::sin(lat.phi);
        out.A_RS = 1.0 + std::log2(tau / (2.0 * M_PI * lambda)) - std::sin(2.0 * lat.phi) / 2.0 -
                   (c * std::log2(c) + s * std::log2(s)) / (s + c);
    }
    return out;
}

EnergyReport energy_report(const StrainField& f) {
    EnergyReport report;
    report.elastic = elastic_energy(f);
    report.core = core_energy(f);
    report.total = report.elastic + report.core;
    report.constants = predicted_constants(f.params);
    const Params& p = f.params;
    report.bound_value = p.epsilon * p.L * report.constants.E0 * p.sin_theta *
                         (report.constants.A - std::log2(p.sin_theta));
    report.ratio = report.total / report.bound_value;
    return report;
}

EnergyReport energy_report(const Params& p) { return energy_report(build_strain_field(p)); }

SweepResult theta_sweep(const Params& p, const std::vector<double>& sin_thetas) {
    if (sin_thetas.size() < 3) {
        throw validation_error("theta_sweep: need at least 3 theta values for a fit");
    }
    SweepResult sweep;
    for (double s : sin_thetas) {
        Params q = p;
        q.sin_theta = s;
        EnergyReport rep;
        try {
            rep = energy_report(q);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Validation) throw;
            sweep.skipped_sin_thetas.push_back(s);
            sweep.skip_reasons.emplace_back(e.what());
            continue;
        }
        SweepRow row;
        row.sin_theta = s;
        row.theta = std::asin(s);
        row.elastic = rep.elastic;
        row.core = rep.core;
        row.total = rep.total;
        row.normalized = rep.total / (q.epsilon * q.L * s);
        row.neg_log2_sin = -std::log2(s);
        sweep.rows.push_back(row);
    }
    if (sweep.rows.size() < 3) {
        throw validation_error("theta_sweep: fewer than 3 grid points are buildable");
    }

    // Ordinary least squares of normalized against -log2 sin(theta).
    const double n = static_cast<double>(sweep.rows.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const SweepRow& r : sweep.rows) {
        sx += r.neg_log2_sin;
        sy += r.normalized;
        sxx += r.neg_log2_sin * r.neg_log2_sin;
        sxy += r.neg_log2_sin * r.normalized;
    }
    const double denom = n * sxx - sx * sx;
    sweep.slope = (n * sxy - sx * sy) / denom;
    sweep.intercept = (sy - sweep.slope * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    const double mean = sy / n;
    for (const SweepRow& r : sweep.rows) {
        const double fit = sweep.intercept + sweep.slope * r.neg_log2_sin;
        ss_res += (r.normalized - fit) * (r.normalized - fit);
        ss_tot += (r.normalized - mean) * (r.normalized - mean);
    }
    sweep.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return sweep;
}

}  // namespace gb
