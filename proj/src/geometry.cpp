#include "navflow/geometry.hpp"

#include <algorithm>
#include <limits>

namespace navflow {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
    if (!cond) throw error(msg);
}
}  // namespace

Domain Domain::box(int dim, double hx, double hy, double hz) {
    require(dim == 2 || dim == 3, "domain: dimension must be 2 or 3");
    require(hx > 0 && hy > 0 && (dim == 2 || hz > 0), "domain: box half-widths must be positive");
    Domain d;
    d.kind_ = DomainKind::CenteredBox;
    d.dim_ = dim;
    d.half_ = {hx, hy, dim == 3 ? hz : 0.0};
    return d;
}

Domain Domain::ball(int dim, double radius) {
    require(dim == 2 || dim == 3, "domain: dimension must be 2 or 3");
    require(radius > 0, "domain: ball radius must be positive");
    Domain d;
    d.kind_ = DomainKind::CenteredBall;
    d.dim_ = dim;
    d.radius_ = radius;
    return d;
}

bool Domain::contains(Point p) const {
    if (kind_ == DomainKind::CenteredBox) {
        if (std::abs(p.x) >= half_.x || std::abs(p.y) >= half_.y) return false;
        if (dim_ == 3 && std::abs(p.z) >= half_.z) return false;
        return true;
    }
    return norm2(p) < radius_ * radius_;
}

bool Domain::contains_closed(Point p, double tol) const {
    if (kind_ == DomainKind::CenteredBox) {
        if (std::abs(p.x) > half_.x + tol || std::abs(p.y) > half_.y + tol) return false;
        if (dim_ == 3 && std::abs(p.z) > half_.z + tol) return false;
        return true;
    }
    double r = radius_ + tol;
    return norm2(p) <= r * r;
}

double Domain::inradius() const {
    if (kind_ == DomainKind::CenteredBall) return radius_;
    double r = std::min(half_.x, half_.y);
    if (dim_ == 3) r = std::min(r, half_.z);
    return r;
}

double Domain::circumradius() const {
    if (kind_ == DomainKind::CenteredBall) return radius_;
    return norm(half_);
}

double Domain::volume() const {
    if (kind_ == DomainKind::CenteredBox) {
        double v = 4.0 * half_.x * half_.y;
        return dim_ == 3 ? v * 2.0 * half_.z : v;
    }
    if (dim_ == 2) return kPi * radius_ * radius_;
    return 4.0 / 3.0 * kPi * radius_ * radius_ * radius_;
}

Point Domain::bbox_half_widths() const {
    if (kind_ == DomainKind::CenteredBox) return half_;
    return {radius_, radius_, dim_ == 3 ? radius_ : 0.0};
}

Domain Domain::eroded(double eps) const {
    require(eps >= 0, "erode: eps must be nonnegative");
    require(eps < inradius(), "erode: eps >= inradius gives an empty domain");
    Domain d = *this;
    if (kind_ == DomainKind::CenteredBox) {
        d.half_ = {half_.x - eps, half_.y - eps, dim_ == 3 ? half_.z - eps : 0.0};
    } else {
        d.radius_ = radius_ - eps;
    }
    return d;
}

Domain Domain::scaled(double s) const {
    require(s > 0, "scale factor must be positive");
    Domain d = *this;
    if (kind_ == DomainKind::CenteredBox) {
        d.half_ = s * half_;
    } else {
        d.radius_ = s * radius_;
    }
    return d;
}

double ray_exit_parameter(Point x, Point dir, const Domain& domain) {
    require(domain.contains(x), "ray_exit_parameter: start point outside domain");
    if (domain.kind() == DomainKind::CenteredBox) {
        Point h = domain.half_widths();
        double t = kInf;
        const double dv[3] = {dir.x, dir.y, dir.z};
        const double xv[3] = {x.x, x.y, x.z};
        const double hv[3] = {h.x, h.y, h.z};
        for (int k = 0; k < domain.dim(); ++k) {
            if (dv[k] > 0)
                t = std::min(t, (hv[k] - xv[k]) / dv[k]);
            else if (dv[k] < 0)
                t = std::min(t, (-hv[k] - xv[k]) / dv[k]);
        }
        require(std::isfinite(t), "ray_exit_parameter: zero direction");
        return t;
    }
    // |x + t dir|^2 = r^2, take the positive root.
    double a = norm2(dir);
    double b = 2.0 * dot(x, dir);
    double c = norm2(x) - domain.radius() * domain.radius();
    require(a > 0, "ray_exit_parameter: zero direction");
    double disc = b * b - 4.0 * a * c;
    double sq = std::sqrt(std::max(0.0, disc));
    return (-b + sq) / (2.0 * a);
}

CrossingSurface::CrossingSurface(SurfaceMode mode, Point x, double s, double g,
                                 const Domain& domain)
    : mode_(mode), x_(x), s_(s), g_(g), dim_(domain.dim()) {
    require(s > 0, "surface: scale must be positive");
    require(g > 0, "surface: window radius must be positive");
    require(domain.contains(x), "surface: location outside domain");
    if (mode == SurfaceMode::Radial) {
        require(norm(x) > 0, "surface: radial location must differ from the origin");
        require(std::isinf(g) || g < s * norm(x),
                "invalid surface: radial window must stay below the sphere radius");
    }
}

double surface_measure(const CrossingSurface& surface) {
    double g = surface.window();
    require(std::isfinite(g), "surface_measure: window radius must be finite");
    if (surface.mode() == SurfaceMode::Directed) {
        return surface.dim() == 2 ? 2.0 * g : kPi * g * g;
    }
    double R = surface.sphere_radius();
    require(g < 2.0 * R, "invalid surface: cap window exceeds the sphere diameter");
    if (surface.dim() == 2) return 4.0 * R * std::asin(g / (2.0 * R));
    double theta = 2.0 * std::asin(g / (2.0 * R));
    return 2.0 * kPi * R * R * (1.0 - std::cos(theta));
}

std::optional<Point> segment_crossing(const Segment& seg, const CrossingSurface& surface) {
    require(!seg.dead_end_self, "segment_crossing: dead-end self-link");
    require(!(seg.a == seg.b), "segment_crossing: degenerate segment");
    if (surface.mode() == SurfaceMode::Directed) {
        double c = surface.plane();
        if (!(seg.a.x <= c && c < seg.b.x)) return std::nullopt;
        double t = (c - seg.a.x) / (seg.b.x - seg.a.x);
        Point p = seg.a + t * (seg.b - seg.a);
        p.x = c;
        if (dist(p, surface.center()) <= surface.window()) return p;
        return std::nullopt;
    }
    double R = surface.sphere_radius();
    Point d = seg.b - seg.a;
    double A = norm2(d);
    double B = 2.0 * dot(seg.a, d);
    double C = norm2(seg.a) - R * R;
    double disc = B * B - 4.0 * A * C;
    if (disc < 0) return std::nullopt;
    double sq = std::sqrt(disc);
    double q = B >= 0 ? -0.5 * (B + sq) : -0.5 * (B - sq);
    double t1 = q / A;
    double t2 = q != 0 ? C / q : t1;
    if (t1 > t2) std::swap(t1, t2);
    for (double t : {t1, t2}) {
        if (t < 0.0 || t >= 1.0) continue;
        Point p = seg.a + t * d;
        if (dist(p, surface.center()) <= surface.window()) return p;
    }
    return std::nullopt;
}

namespace {

// Distance from the perp coordinates of p to the perp cross-section of an
// eroded box; 0 when inside.
double perp_box_excess(Point p, Point half, int dim) {
    double ey = std::max(0.0, std::abs(p.y) - half.y);
    if (dim == 2) return ey;
    double ez = std::max(0.0, std::abs(p.z) - half.z);
    return std::hypot(ey, ez);
}

}  // namespace

double left_cut(const LeftCylinderMinus& r) {
    require(r.g > r.h, "left cylinder minus: requires g > h");
    double rho = (r.g - r.h) / r.s;  // unscaled tube radius
    const Domain& D = r.domain;
    if (r.eps >= D.inradius()) return kInf;
    Domain de = D.eroded(r.eps);
    if (D.kind() == DomainKind::CenteredBox) {
        if (perp_box_excess(r.x, de.half_widths(), D.dim()) > rho) return kInf;
        return -de.half_widths().x;
    }
    double re = de.radius();
    double m = std::max(0.0, perp_norm_e1(r.x) - rho);
    if (m > re) return kInf;
    return -std::sqrt(re * re - m * m);
}

namespace {

bool contains_impl(const DirectedCylinder& c, Point p) {
    return perp_norm_e1(p - c.anchor) <= c.radius;
}

bool contains_impl(const RadialCylinder& c, Point p) {
    double n = norm(c.direction);
    require(n > 0, "radial cylinder: zero direction");
    Point v = (1.0 / n) * c.direction;
    Point w = p - dot(p, v) * v;
    return norm(w) <= c.radius;
}

bool contains_impl(const LeftCylinderPlus& c, Point p) {
    Point sx = c.s * c.x;
    if (!c.domain.scaled(c.s).contains(p)) return false;
    if (p.x > sx.x) return false;
    return perp_norm_e1(p - sx) <= c.g + c.h;
}

bool contains_impl(const LeftCylinderMinus& c, Point p) {
    Point sx = c.s * c.x;
    if (!c.domain.scaled(c.s).contains(p)) return false;
    if (p.x > sx.x) return false;
    if (perp_norm_e1(p - sx) > c.g - c.h) return false;
    double zeta = left_cut(c);
    return std::isfinite(zeta) && p.x >= c.s * zeta;
}

bool cone_contains(Point x, double s, double width, const Domain& domain, Point p) {
    if (!domain.scaled(s).contains(p)) return false;
    double R = s * norm(x);
    double np = norm(p);
    if (!(np > R)) return false;
    Point xh = (1.0 / norm(x)) * x;
    Point ph = (1.0 / np) * p;
    return R * norm(ph - xh) <= width;
}

bool contains_impl(const ConePlus& c, Point p) {
    return cone_contains(c.x, c.s, c.g + 2.0 * c.h, c.domain, p);
}

bool contains_impl(const ConeMinus& c, Point p) {
    require(c.g >= 2.0 * c.h, "cone minus: requires g >= 2h");
    return cone_contains(c.x, c.s, c.g - 2.0 * c.h, c.domain, p);
}

}  // namespace

bool region_contains(const RegionSpec& region, Point p) {
    return std::visit([&](const auto& r) { return contains_impl(r, p); }, region);
}

std::optional<Segment> clip_segment_to_domain(const Domain& domain, Point a, Point b) {
    Point d = b - a;
    double t0 = 0.0, t1 = 1.0;
    if (domain.kind() == DomainKind::CenteredBox) {
        Point h = domain.half_widths();
        const double dv[3] = {d.x, d.y, d.z};
        const double av[3] = {a.x, a.y, a.z};
        const double hv[3] = {h.x, h.y, h.z};
        for (int k = 0; k < domain.dim(); ++k) {
            if (dv[k] == 0.0) {
                if (std::abs(av[k]) > hv[k]) return std::nullopt;
                continue;
            }
            double ta = (-hv[k] - av[k]) / dv[k];
            double tb = (hv[k] - av[k]) / dv[k];
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 > t1) return std::nullopt;
        }
    } else {
        double A = norm2(d);
        double B = 2.0 * dot(a, d);
        double C = norm2(a) - domain.radius() * domain.radius();
        if (A == 0.0) {
            if (C > 0) return std::nullopt;
            return Segment{a, b};
        }
        double disc = B * B - 4.0 * A * C;
        if (disc < 0) return std::nullopt;
        double sq = std::sqrt(disc);
        double q = B >= 0 ? -0.5 * (B + sq) : -0.5 * (B - sq);
        double ra = q / A;
        double rb = q != 0 ? C / q : ra;
        if (ra > rb) std::swap(ra, rb);
        t0 = std::max(t0, ra);
        t1 = std::min(t1, rb);
        if (t0 > t1) return std::nullopt;
    }
    return Segment{a + t0 * d, a + t1 * d};
}

}  // namespace navflow
