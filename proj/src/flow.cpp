#include "navflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace navflow {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::int32_t> topological_order(const NavigationForest& forest,
                                            const PointPattern& pat) {
    std::vector<std::int32_t> order(pat.size());
    std::iota(order.begin(), order.end(), 0);
    const auto& pts = pat.points;
    if (forest.mode == ForestMode::Directed) {
        std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
            if (pts[a].x != pts[b].x) return pts[a].x < pts[b].x;
            return a < b;
        });
    } else {
        std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
            double na = norm2(pts[a]), nb = norm2(pts[b]);
            if (na != nb) return na > nb;
            return a < b;
        });
    }
    return order;
}

}  // namespace

std::vector<std::int32_t> trajectory(std::int32_t start, const NavigationForest& forest) {
    std::size_t n = forest.size();
    if (start < 0 || static_cast<std::size_t>(start) >= n)
        throw error("trajectory: invalid start node");
    std::vector<std::int32_t> seq{start};
    std::int32_t cur = start;
    while (forest.successor[cur] >= 0) {
        cur = forest.successor[cur];
        seq.push_back(cur);
        if (seq.size() > n) throw error("forest corruption: successor cycle detected");
    }
    return seq;
}

std::vector<double> accumulate_traffic(const NavigationForest& forest, const PointPattern& pat,
                                       std::span<const double> rates) {
    std::size_t n = forest.size();
    if (rates.size() != n) throw error("accumulate_traffic: rate count mismatch");
    for (double r : rates)
        if (!(r >= 0)) throw error("accumulate_traffic: rates must be nonnegative");
    std::vector<double> delta(rates.begin(), rates.end());
    for (std::int32_t i : topological_order(forest, pat)) {
        std::int32_t j = forest.successor[i];
        if (j >= 0) delta[j] += delta[i];
    }
    return delta;
}

CrossingSet crossing_set(const NavigationForest& forest, const PointPattern& pat,
                         const CrossingSurface& surface) {
    CrossingSet out;
    for (std::size_t i = 0; i < forest.size(); ++i) {
        std::int32_t j = forest.successor[i];
        if (j == kDeadEnd) continue;
        Point b = j == kOriginSink ? Point{} : pat.points[j];
        if (pat.points[i] == b) continue;
        Segment seg{pat.points[i], b};
        if (auto hit = segment_crossing(seg, surface)) {
            out.members.emplace_back(static_cast<std::int32_t>(i), *hit);
        }
    }
    return out;
}

namespace {

struct Extent {
    double hi = -kInf;
    double lo = kInf;
    void add(double v) {
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    void merge(const Extent& o) {
        hi = std::max(hi, o.hi);
        lo = std::min(lo, o.lo);
    }
};

// Directed clipped deviations. d=2 uses suffix extrema of the tested y values,
// exact and O(n) because every start shares its successor's suffix; d=3 walks
// each trajectory.
std::vector<double> directed_clipped_dev(const NavigationForest& forest, const PointPattern& pat,
                                         const Domain& eroded, ContainmentKind kind) {
    const auto& pts = pat.points;
    std::size_t n = pat.size();
    std::vector<double> dev(n, 0.0);

    if (pat.domain.dim() == 2) {
        std::vector<std::int32_t> order = topological_order(forest, pat);
        std::vector<Extent> ext(n);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            std::int32_t i = *it;
            std::int32_t j = forest.successor[i];
            if (j >= 0) {
                ext[i] = ext[j];
                if (kind == ContainmentKind::Interpolated) {
                    if (auto clip = clip_segment_to_domain(eroded, pts[i], pts[j])) {
                        ext[i].add(clip->a.y);
                        ext[i].add(clip->b.y);
                    }
                } else if (eroded.contains(pts[i])) {
                    ext[i].add(pts[i].y);
                }
            } else if (eroded.contains(pts[i])) {
                ext[i].add(pts[i].y);
            }
            dev[i] = std::max({0.0, ext[i].hi - pts[i].y, pts[i].y - ext[i].lo});
        }
        return dev;
    }

    for (std::size_t i = 0; i < n; ++i) {
        Point c = pts[i];
        double worst = 0.0;
        std::int32_t cur = static_cast<std::int32_t>(i);
        std::size_t steps = 0;
        auto test = [&](Point p) {
            worst = std::max(worst, std::hypot(p.y - c.y, p.z - c.z));
        };
        for (;;) {
            std::int32_t j = forest.successor[cur];
            if (j >= 0 && kind == ContainmentKind::Interpolated) {
                if (auto clip = clip_segment_to_domain(eroded, pts[cur], pts[j])) {
                    test(clip->a);
                    test(clip->b);
                }
            } else if (eroded.contains(pts[cur])) {
                test(pts[cur]);
            }
            if (j < 0) break;
            cur = j;
            if (++steps > n) throw error("forest corruption: successor cycle detected");
        }
        dev[i] = worst;
    }
    return dev;
}

void radial_events_walk(const NavigationForest& forest, const PointPattern& pat, double h,
                        std::vector<std::int32_t>& violating) {
    const auto& pts = pat.points;
    std::size_t n = pat.size();
    double h2 = h * h;
    for (std::size_t i = 0; i < n; ++i) {
        double ni = norm(pts[i]);
        if (ni == 0) continue;
        Point axis = (1.0 / ni) * pts[i];
        std::int32_t cur = static_cast<std::int32_t>(i);
        std::size_t steps = 0;
        bool bad = false;
        for (;;) {
            Point p = pts[cur];
            double along = dot(p, axis);
            double dev2 = norm2(p) - along * along;
            if (dev2 > h2) {
                bad = true;
                break;
            }
            std::int32_t j = forest.successor[cur];
            if (j < 0) break;
            cur = j;
            if (++steps > n) throw error("forest corruption: successor cycle detected");
        }
        if (bad) violating.push_back(static_cast<std::int32_t>(i));
    }
}

}  // namespace

EventReport check_events(const NavigationForest& forest, const PointPattern& pat, double eps,
                         double h, std::optional<ContainmentKind> kind_opt) {
    if (!(eps >= 0) || !(h >= 0)) throw error("check_events: eps and h must be nonnegative");
    EventReport rep;
    if (forest.size() == 0) return rep;

    if (forest.mode == ForestMode::Directed) {
        ContainmentKind kind = kind_opt.value_or(ContainmentKind::Interpolated);
        double s = pat.scale;
        Domain scaled = pat.domain.scaled(s);
        double eps_abs = eps * s;
        if (eps_abs >= scaled.inradius()) return rep;  // empty interior, both events vacuous
        Domain eroded = scaled.eroded(eps_abs);

        std::vector<std::int32_t> dead;
        for (std::size_t i = 0; i < forest.size(); ++i) {
            if (forest.successor[i] == kDeadEnd && eroded.contains(pat.points[i]))
                dead.push_back(static_cast<std::int32_t>(i));
        }
        std::vector<std::int32_t> cyl;
        std::vector<double> dev = directed_clipped_dev(forest, pat, eroded, kind);
        for (std::size_t i = 0; i < dev.size(); ++i) {
            if (dev[i] > h) cyl.push_back(static_cast<std::int32_t>(i));
        }
        rep.no_dead_ends_in_interior = dead.empty();
        rep.cylinder_containment = cyl.empty();
        rep.violating = std::move(dead);
        rep.violating.insert(rep.violating.end(), cyl.begin(), cyl.end());
    } else {
        // interpolated containment coincides with the node set: segment
        // endpoints are the trajectory nodes and the origin
        std::vector<std::int32_t> cyl;
        radial_events_walk(forest, pat, h, cyl);
        rep.cylinder_containment = cyl.empty();
        rep.violating = std::move(cyl);
    }
    std::sort(rep.violating.begin(), rep.violating.end());
    rep.violating.erase(std::unique(rep.violating.begin(), rep.violating.end()),
                        rep.violating.end());
    return rep;
}

std::vector<double> max_deviation(const NavigationForest& forest, const PointPattern& pat) {
    std::size_t n = forest.size();
    std::vector<double> dev(n, 0.0);
    if (n == 0) return dev;
    const auto& pts = pat.points;

    if (forest.mode == ForestMode::Directed && pat.domain.dim() == 2) {
        std::vector<std::int32_t> order = topological_order(forest, pat);
        std::vector<Extent> ext(n);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            std::int32_t i = *it;
            std::int32_t j = forest.successor[i];
            if (j >= 0) ext[i] = ext[j];
            ext[i].add(pts[i].y);
            dev[i] = std::max(ext[i].hi - pts[i].y, pts[i].y - ext[i].lo);
        }
        return dev;
    }

    for (std::size_t i = 0; i < n; ++i) {
        std::int32_t cur = static_cast<std::int32_t>(i);
        std::size_t steps = 0;
        double worst2 = 0.0;
        if (forest.mode == ForestMode::Directed) {
            Point c = pts[i];
            for (;;) {
                Point p = pts[cur];
                double dy = p.y - c.y, dz = p.z - c.z;
                worst2 = std::max(worst2, dy * dy + dz * dz);
                std::int32_t j = forest.successor[cur];
                if (j < 0) break;
                cur = j;
                if (++steps > n) throw error("forest corruption: successor cycle detected");
            }
        } else {
            double ni = norm(pts[i]);
            if (ni == 0) continue;
            Point axis = (1.0 / ni) * pts[i];
            for (;;) {
                Point p = pts[cur];
                double along = dot(p, axis);
                worst2 = std::max(worst2, norm2(p) - along * along);
                std::int32_t j = forest.successor[cur];
                if (j < 0) break;
                cur = j;
                if (++steps > n) throw error("forest corruption: successor cycle detected");
            }
        }
        dev[i] = std::sqrt(std::max(0.0, worst2));
    }
    return dev;
}

std::vector<double> max_deviation_clipped(const NavigationForest& forest,
                                          const PointPattern& pat, double eps) {
    if (!(eps >= 0)) throw error("max_deviation_clipped: eps must be nonnegative");
    if (forest.mode == ForestMode::Radial) return max_deviation(forest, pat);
    std::size_t n = forest.size();
    if (n == 0) return {};
    double s = pat.scale;
    Domain scaled = pat.domain.scaled(s);
    if (eps * s >= scaled.inradius()) return std::vector<double>(n, 0.0);
    return directed_clipped_dev(forest, pat, scaled.eroded(eps * s),
                                ContainmentKind::Interpolated);
}

}  // namespace navflow
