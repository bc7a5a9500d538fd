#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace gb {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// 2x2 matrix, row-major: [[a11 a12] [a21 a22]].
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    Mat2() = default;
    Mat2(double m11, double m12, double m21, double m22) : a11(m11), a12(m12), a21(m21), a22(m22) {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    // Counterclockwise rotation with the given cosine/sine pair.
    static Mat2 rotation_cs(double c, double s) { return {c, -s, s, c}; }
    static Mat2 rotation(double angle) { return rotation_cs(std::cos(angle), std::sin(angle)); }
    static Mat2 outer(const Vec2& u, const Vec2& v) {
        return {u.x * v.x, u.x * v.y, u.y * v.x, u.y * v.y};
    }

    Vec2 apply(const Vec2& v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
    Vec2 col(int j) const { return j == 0 ? Vec2{a11, a21} : Vec2{a12, a22}; }

    Mat2 operator+(const Mat2& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
    Mat2 operator-(const Mat2& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
    Mat2 mul(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }

    double det() const { return a11 * a22 - a12 * a21; }
    double frobenius2() const { return a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22; }
    double frobenius() const { return std::sqrt(frobenius2()); }
    double max_abs() const {
        return std::max(std::max(std::fabs(a11), std::fabs(a12)), std::max(std::fabs(a21), std::fabs(a22)));
    }
};

struct Segment {
    Vec2 a;
    Vec2 b;

    Vec2 direction() const { return b - a; }
    double length() const { return (b - a).norm(); }
    Vec2 midpoint() const { return {(a.x + b.x) / 2.0, (a.y + b.y) / 2.0}; }
};

struct Rect {
    Vec2 lo;
    Vec2 hi;

    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    double area() const { return width() * height(); }
    bool contains(const Vec2& p, double tol) const {
        return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol && p.y <= hi.y + tol;
    }
};

// Simple polygon stored counterclockwise. The constructor flips a clockwise
// vertex list; all higher-level code can rely on positive signed area.
// Convexity is not enforced: every cell of the construction is convex except
// the notched Q^l / Q^r region, and the operations below are valid for any
// simple polygon.
class Polygon {
  public:
    Polygon() = default;
    explicit Polygon(std::vector<Vec2> vertices);

    const std::vector<Vec2>& vertices() const { return verts_; }
    std::size_t size() const { return verts_.size(); }
    const Vec2& operator[](std::size_t i) const { return verts_[i]; }

    double signed_area() const;
    Rect bbox() const;
    double perimeter() const;
    bool contains(const Vec2& p, double tol) const;
    bool is_convex(double tol) const;
    Segment edge(std::size_t i) const { return {verts_[i], verts_[(i + 1) % verts_.size()]}; }

  private:
    std::vector<Vec2> verts_;
};

// Absolute tolerance used by the geometric predicates: 1e-12 times the
// ambient domain diameter. Everything in this library funnels through this
// single epsilon.
double geometry_tolerance(double domain_diameter);

// Positive area of a simple polygon (shoelace). Throws on a degenerate
// (collinear or near-empty) vertex list.
double polygon_area(const Polygon& p);

// Longest common boundary segment of two polygons, or nullopt when they share
// at most a point. Symmetric up to endpoint order.
std::optional<Segment> shared_edge(const Polygon& p, const Polygon& q, double tol);

// All positive-length collinear overlaps between the boundaries of p and q.
std::vector<Segment> shared_edge_overlaps(const Polygon& p, const Polygon& q, double tol);

// Intersection with an axis-aligned rectangle (Sutherland-Hodgman half-plane
// clipping). Returns nullopt when the intersection has zero area. Correct for
// convex polygons and for any simple polygon whose intersection with the
// rectangle is connected, which covers every cell produced here.
std::optional<Polygon> clip_to_rect(const Polygon& p, const Rect& r, double tol);

// Exact area of the closed rho-neighbourhood (Euclidean, rounded corners) of
// the boundary of the square [-r0, r0]^2.
double square_band_area(double r0, double rho);

// Euclidean distance from x to the boundary of the square of half-side r0
// centred at `center`.
double distance_to_square_boundary(const Vec2& x, const Vec2& center, double r0);

// Whether x lies within distance rho of the boundary of the square of
// half-side r0 centred at `center`.
bool point_in_band(const Vec2& x, const Vec2& center, double r0, double rho);

// Distance from a segment to the solid square of half-side r0 centred at
// `center` (zero if the segment meets the square).
double segment_to_square_distance(const Segment& s, const Vec2& center, double r0);

// Parameters t in [0,1] at which the segment crosses the line through e;
// used when slicing a polyline against a cell complex.
std::optional<double> segment_line_intersection(const Segment& s, const Segment& e, double tol);

}  // namespace gb
