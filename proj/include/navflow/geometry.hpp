#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <variant>

#include "navflow/errors.hpp"

namespace navflow {

// Absolute tolerance for geometric predicates in unscaled coordinates.
inline constexpr double kGeomTol = 1e-12;

struct Point {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point operator*(double c, Point p) { return {c * p.x, c * p.y, c * p.z}; }
inline bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm2(Point p) { return dot(p, p); }
inline double norm(Point p) { return std::sqrt(norm2(p)); }
inline double dist2(Point a, Point b) { return norm2(a - b); }
inline double dist(Point a, Point b) { return std::sqrt(dist2(a, b)); }

// Length of the projection orthogonal to e1.
inline double perp_norm_e1(Point p) { return std::hypot(p.y, p.z); }

// Coordinate-wise comparison used for all successor tie-breaks.
inline bool lex_less(Point a, Point b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
}

enum class DomainKind { CenteredBox, CenteredBall };

// Open bounded convex domain centered at the origin: an axis-aligned box of
// given half-widths or a ball of given radius, in dimension 2 or 3.
class Domain {
  public:
    static Domain box(int dim, double hx, double hy, double hz = 0.0);
    static Domain ball(int dim, double radius);

    DomainKind kind() const { return kind_; }
    int dim() const { return dim_; }
    Point half_widths() const { return half_; }
    double radius() const { return radius_; }

    bool contains(Point p) const;                                // open
    bool contains_closed(Point p, double tol = kGeomTol) const;  // closure + tol
    double inradius() const;
    double circumradius() const;
    double volume() const;
    Point bbox_half_widths() const;

    Domain eroded(double eps) const;  // throws on eps >= inradius
    Domain scaled(double s) const;

  private:
    Domain() = default;
    DomainKind kind_ = DomainKind::CenteredBox;
    int dim_ = 2;
    Point half_;
    double radius_ = 0.0;
};

// First t > 0 with x + t*dir on the boundary; dir must be a unit vector and
// x must lie inside the domain.
double ray_exit_parameter(Point x, Point dir, const Domain& domain);

struct Segment {
    Point a;
    Point b;
    bool dead_end_self = false;  // flagged self-links are never intersection-tested
};

enum class SurfaceMode { Directed, Radial };

// Observation window near sx: a flat disc inside the hyperplane pi1 = pi1(sx)
// (directed) or a spherical cap on the sphere of radius s|x| (radial), both of
// window radius g. A radial surface accepts g = +inf as a full-sphere sentinel
// used by crossing-count diagnostics.
class CrossingSurface {
  public:
    CrossingSurface(SurfaceMode mode, Point x, double s, double g, const Domain& domain);

    SurfaceMode mode() const { return mode_; }
    Point location() const { return x_; }
    double scale() const { return s_; }
    double window() const { return g_; }
    int dim() const { return dim_; }

    Point center() const { return s_ * x_; }
    double plane() const { return s_ * x_.x; }
    double sphere_radius() const { return s_ * norm(x_); }

  private:
    SurfaceMode mode_;
    Point x_;
    double s_;
    double g_;
    int dim_;
};

double surface_measure(const CrossingSurface& surface);

// Intersection of a directed link segment with the surface. Directed mode uses
// the half-open convention pi1(a) <= plane < pi1(b); radial mode solves the
// sphere quadratic for t in [0,1) and keeps the first root inside the cap.
std::optional<Point> segment_crossing(const Segment& seg, const CrossingSurface& surface);

// Regions from the traffic sandwich bounds. Coordinates of tested points are
// scaled (points of X^(s)); x is the unscaled observation location.
struct DirectedCylinder {  // Z^D_r(anchor)
    Point anchor;
    double radius = 0.0;
};
struct RadialCylinder {  // Z^R_r(direction): axis through the origin
    Point direction;
    double radius = 0.0;
};
struct LeftCylinderPlus {  // points of sD in the (g+h)-tube, left of sx
    Point x;
    double s = 1.0, g = 0.0, h = 0.0;
    Domain domain = Domain::box(2, 0.5, 0.5);
};
struct LeftCylinderMinus {  // (g-h)-tube, left of sx, cut at the eps-interior
    Point x;
    double s = 1.0, g = 0.0, h = 0.0, eps = 0.0;
    Domain domain = Domain::box(2, 0.5, 0.5);
};
struct ConePlus {  // points of sD outside radius s|x| with s|x| |yhat-xhat| <= g+2h
    Point x;
    double s = 1.0, g = 0.0, h = 0.0;
    Domain domain = Domain::ball(2, 1.0);
};
struct ConeMinus {  // same with g-2h; requires g >= 2h
    Point x;
    double s = 1.0, g = 0.0, h = 0.0;
    Domain domain = Domain::ball(2, 1.0);
};

using RegionSpec = std::variant<DirectedCylinder, RadialCylinder, LeftCylinderPlus,
                                LeftCylinderMinus, ConePlus, ConeMinus>;

bool region_contains(const RegionSpec& region, Point p);

// Smallest unscaled first coordinate of the eps-interior restricted to the
// (g-h)/s tube around the horizontal line through x; +inf when that set is
// empty. This is the left cut applied by LeftCylinderMinus.
double left_cut(const LeftCylinderMinus& region);

// Closed clip of [a,b] to the domain; empty when the segment misses it.
std::optional<Segment> clip_segment_to_domain(const Domain& domain, Point a, Point b);

}  // namespace navflow
