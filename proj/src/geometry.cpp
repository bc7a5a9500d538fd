#include "gb/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "gb/errors.hpp"

namespace gb {

namespace {

double signed_area_of(const std::vector<Vec2>& v) {
    double twice = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return twice / 2.0;
}

}  // namespace

Polygon::Polygon(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
    if (verts_.size() >= 3 && signed_area_of(verts_) < 0.0) {
        std::reverse(verts_.begin(), verts_.end());
    }
}

double Polygon::signed_area() const { return signed_area_of(verts_); }

Rect Polygon::bbox() const {
    Rect r{verts_.front(), verts_.front()};
    for (const Vec2& p : verts_) {
        r.lo.x = std::min(r.lo.x, p.x);
        r.lo.y = std::min(r.lo.y, p.y);
        r.hi.x = std::max(r.hi.x, p.x);
        r.hi.y = std::max(r.hi.y, p.y);
    }
    return r;
}

double Polygon::perimeter() const {
    double total = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i) total += edge(i).length();
    return total;
}

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.norm2();
    if (len2 == 0.0) return (p - a).norm();
    double t = (p - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

}  // namespace

bool Polygon::contains(const Vec2& p, double tol) const {
    const std::size_t n = verts_.size();
    if (n < 3) return false;
    // Boundary points count as inside.
    for (std::size_t i = 0; i < n; ++i) {
        if (point_segment_distance(p, verts_[i], verts_[(i + 1) % n]) <= tol) return true;
    }
    // Crossing number on a horizontal ray.
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = verts_[j];
        const Vec2& b = verts_[i];
        if ((b.y > p.y) != (a.y > p.y)) {
            const double xint = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

bool Polygon::is_convex(double tol) const {
    const std::size_t n = verts_.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = verts_[i];
        const Vec2& b = verts_[(i + 1) % n];
        const Vec2& c = verts_[(i + 2) % n];
        if ((b - a).cross(c - b) < -tol * (b - a).norm()) return false;
    }
    return true;
}

double geometry_tolerance(double domain_diameter) { return 1e-12 * domain_diameter; }

double polygon_area(const Polygon& p) {
    if (p.size() < 3) throw validation_error("polygon_area: fewer than 3 vertices");
    const double area = std::fabs(p.signed_area());
    const Rect bb = p.bbox();
    const double diag2 = (bb.hi - bb.lo).norm2();
    if (area <= 1e-14 * diag2 || diag2 == 0.0) {
        throw validation_error("polygon_area: degenerate (collinear) polygon");
    }
    return area;
}

std::vector<Segment> shared_edge_overlaps(const Polygon& p, const Polygon& q, double tol) {
    std::vector<Segment> overlaps;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Segment ep = p.edge(i);
        const Vec2 d = ep.direction();
        const double len = d.norm();
        if (len <= tol) continue;
        const Vec2 u = d / len;
        for (std::size_t j = 0; j < q.size(); ++j) {
            const Segment eq = q.edge(j);
            // Both endpoints of eq must lie on the line through ep.
            const double d1 = std::fabs((eq.a - ep.a).cross(u));
            const double d2 = std::fabs((eq.b - ep.a).cross(u));
            if (d1 > tol || d2 > tol) continue;
            // Overlap interval in arclength along ep.
            double s1 = (eq.a - ep.a).dot(u);
            double s2 = (eq.b - ep.a).dot(u);
            if (s1 > s2) std::swap(s1, s2);
            const double lo = std::max(0.0, s1);
            const double hi = std::min(len, s2);
            if (hi - lo > tol) {
                overlaps.push_back({ep.a + u * lo, ep.a + u * hi});
            }
        }
    }
    return overlaps;
}

std::optional<Segment> shared_edge(const Polygon& p, const Polygon& q, double tol) {
    const std::vector<Segment> overlaps = shared_edge_overlaps(p, q, tol);
    if (overlaps.empty()) return std::nullopt;
    const Segment* best = &overlaps.front();
    for (const Segment& s : overlaps) {
        if (s.length() > best->length()) best = &s;
    }
    return *best;
}

namespace {

// Clip a vertex loop against the half-plane keep(x) >= 0.
template <typename Signed>
std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& in, Signed keep, double tol) {
    std::vector<Vec2> out;
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& cur = in[i];
        const Vec2& nxt = in[(i + 1) % n];
        const double sc = keep(cur);
        const double sn = keep(nxt);
        const bool cin = sc >= -tol;
        const bool nin = sn >= -tol;
        if (cin) out.push_back(cur);
        if (cin != nin) {
            const double t = sc / (sc - sn);
            out.push_back(cur + (nxt - cur) * t);
        }
    }
    return out;
}

std::vector<Vec2> dedupe(const std::vector<Vec2>& in, double tol) {
    std::vector<Vec2> out;
    for (const Vec2& p : in) {
        if (out.empty() || (p - out.back()).norm() > tol) out.push_back(p);
    }
    while (out.size() > 1 && (out.front() - out.back()).norm() <= tol) out.pop_back();
    return out;
}

}  // namespace

std::optional<Polygon> clip_to_rect(const Polygon& p, const Rect& r, double tol) {
    if (p.size() < 3) return std::nullopt;
    std::vector<Vec2> v(p.vertices().begin(), p.vertices().end());
    v = clip_half_plane(v, [&](const Vec2& q) { return q.x - r.lo.x; }, tol);
    if (v.size() >= 3) v = clip_half_plane(v, [&](const Vec2& q) { return r.hi.x - q.x; }, tol);
    if (v.size() >= 3) v = clip_half_plane(v, [&](const Vec2& q) { return q.y - r.lo.y; }, tol);
    if (v.size() >= 3) v = clip_half_plane(v, [&](const Vec2& q) { return r.hi.y - q.y; }, tol);
    v = dedupe(v, tol);
    if (v.size() < 3) return std::nullopt;
    Polygon out(std::move(v));
    const double area = std::fabs(out.signed_area());
    if (area <= 1e-12 * std::fabs(p.signed_area())) return std::nullopt;
    return out;
}

double square_band_area(double r0, double rho) {
    if (r0 <= 0.0 || rho < 0.0) throw validation_error("square_band_area: need r0 > 0 and rho >= 0");
    const double side = 2.0 * r0;
    const double outer = side * side + 4.0 * side * rho + M_PI * rho * rho;
    const double inner_side = std::max(2.0 * (r0 - rho), 0.0);
    return outer - inner_side * inner_side;
}

double distance_to_square_boundary(const Vec2& x, const Vec2& center, double r0) {
    const double ux = std::fabs(x.x - center.x) - r0;
    const double uy = std::fabs(x.y - center.y) - r0;
    if (ux <= 0.0 && uy <= 0.0) return -std::max(ux, uy);
    return std::hypot(std::max(ux, 0.0), std::max(uy, 0.0));
}

bool point_in_band(const Vec2& x, const Vec2& center, double r0, double rho) {
    if (r0 <= 0.0 || rho < 0.0) throw validation_error("point_in_band: need r0 > 0 and rho >= 0");
    return distance_to_square_boundary(x, center, r0) <= rho;
}

namespace {

double segment_segment_distance(const Segment& s, const Segment& t) {
    // Intersecting segments have distance zero.
    const Vec2 d1 = s.direction();
    const Vec2 d2 = t.direction();
    const Vec2 r = t.a - s.a;
    const double denom = d1.cross(d2);
    if (std::fabs(denom) > 0.0) {
        const double u = r.cross(d2) / denom;
        const double v = r.cross(d1) / denom;
        if (u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0) return 0.0;
    }
    double best = point_segment_distance(s.a, t.a, t.b);
    best = std::min(best, point_segment_distance(s.b, t.a, t.b));
    best = std::min(best, point_segment_distance(t.a, s.a, s.b));
    best = std::min(best, point_segment_distance(t.b, s.a, s.b));
    return best;
}

}  // namespace

double segment_to_square_distance(const Segment& s, const Vec2& center, double r0) {
    const Vec2 c1{center.x - r0, center.y - r0};
    const Vec2 c2{center.x + r0, center.y - r0};
    const Vec2 c3{center.x + r0, center.y + r0};
    const Vec2 c4{center.x - r0, center.y + r0};
    // Endpoint inside the solid square.
    auto inside = [&](const Vec2& p) {
        return std::fabs(p.x - center.x) <= r0 && std::fabs(p.y - center.y) <= r0;
    };
    if (inside(s.a) || inside(s.b)) return 0.0;
    double best = segment_segment_distance(s, {c1, c2});
    best = std::min(best, segment_segment_distance(s, {c2, c3}));
    best = std::min(best, segment_segment_distance(s, {c3, c4}));
    best = std::min(best, segment_segment_distance(s, {c4, c1}));
    return best;
}

std::optional<double> segment_line_intersection(const Segment& s, const Segment& e, double tol) {
    const Vec2 d = s.direction();
    const Vec2 n{-(e.b - e.a).y, (e.b - e.a).x};
    const double denom = d.dot(n);
    const double elen = (e.b - e.a).norm();
    if (std::fabs(denom) <= tol * elen) return std::nullopt;
    const double t = (e.a - s.a).dot(n) / denom;
    if (t < -tol || t > 1.0 + tol) return std::nullopt;
    // Crossing point must fall within the edge extent (with slack).
    const Vec2 p = s.a + d * t;
    const Vec2 u = (e.b - e.a) / elen;
    const double along = (p - e.a).dot(u);
    if (along < -tol || along > elen + tol) return std::nullopt;
    return std::clamp(t, 0.0, 1.0);
}

}  // namespace gb
