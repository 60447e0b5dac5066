// Independent reference implementations used as test oracles. Everything here
// recomputes results from definitions (full scans, explicit trajectory
// enumeration, adjacency BFS) without touching the library's fast paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "navflow/estimators.hpp"
#include "navflow/rng.hpp"

namespace oracles {

using namespace navflow;

inline PointPattern random_pattern(const Domain& domain, double s, std::size_t n, RngStream& rng,
                                   bool avoid_origin = false) {
    PointPattern pat;
    pat.domain = domain;
    pat.scale = s;
    Domain scaled = domain.scaled(s);
    Point h = scaled.bbox_half_widths();
    while (pat.points.size() < n) {
        Point p{rng.uniform(-h.x, h.x), rng.uniform(-h.y, h.y),
                domain.dim() == 3 ? rng.uniform(-h.z, h.z) : 0.0};
        if (!scaled.contains(p)) continue;
        if (avoid_origin && norm(p) == 0) continue;
        pat.points.push_back(p);
    }
    return pat;
}

// forest from the definitional per-node scans
inline NavigationForest brute_forest(const PointPattern& pat, const NavigationScheme& scheme) {
    if (scheme.kind == SchemeKind::MinHopBoundedRadial)
        return min_hop_bounded_forest(pat, scheme.range);
    NavigationForest f;
    f.mode = scheme.radial() ? ForestMode::Radial : ForestMode::Directed;
    f.successor.resize(pat.size());
    for (std::size_t i = 0; i < pat.size(); ++i) {
        switch (scheme.kind) {
            case SchemeKind::DirectedSpanningTree:
                f.successor[i] = dst_successor(i, pat);
                break;
            case SchemeKind::ConeDirected:
                f.successor[i] = cone_directed_successor(i, pat, scheme.half_angle);
                break;
            case SchemeKind::RadialSpanningTree:
                f.successor[i] = rst_successor(i, pat);
                break;
            case SchemeKind::ConeRadial:
                f.successor[i] = cone_radial_successor(i, pat, scheme.half_angle);
                break;
            default:
                break;
        }
    }
    return f;
}

// traffic by explicit trajectory enumeration: delta(i) = sum of mu_j over all
// j whose trajectory visits i
inline std::vector<double> delta_enumeration(const NavigationForest& forest,
                                             const std::vector<double>& rates) {
    std::vector<double> delta(forest.size(), 0.0);
    for (std::size_t j = 0; j < forest.size(); ++j) {
        for (std::int32_t node : trajectory(static_cast<std::int32_t>(j), forest)) {
            delta[node] += rates[j];
        }
    }
    return delta;
}

// per-node max deviation by explicit trajectory enumeration
inline std::vector<double> max_deviation_enumeration(const NavigationForest& forest,
                                                     const PointPattern& pat) {
    std::vector<double> dev(forest.size(), 0.0);
    for (std::size_t i = 0; i < forest.size(); ++i) {
        Point c = pat.points[i];
        double worst = 0.0;
        if (forest.mode == ForestMode::Directed) {
            for (std::int32_t node : trajectory(static_cast<std::int32_t>(i), forest)) {
                Point p = pat.points[node];
                worst = std::max(worst, std::hypot(p.y - c.y, p.z - c.z));
            }
        } else {
            double nc = norm(c);
            if (nc == 0) continue;
            Point axis = (1.0 / nc) * c;
            for (std::int32_t node : trajectory(static_cast<std::int32_t>(i), forest)) {
                Point p = pat.points[node];
                double along = dot(p, axis);
                worst = std::max(worst, std::sqrt(std::max(0.0, norm2(p) - along * along)));
            }
        }
        dev[i] = worst;
    }
    return dev;
}

// min-hop distances by dense relaxation over the explicit adjacency relation
inline std::vector<int> min_hop_counts_dense(const PointPattern& pat, double rho) {
    std::size_t n = pat.size();
    const int inf = 1 << 29;
    std::vector<int> hop(n, inf);
    for (std::size_t i = 0; i < n; ++i)
        if (norm(pat.points[i]) <= rho) hop[i] = 1;
    for (std::size_t round = 0; round < n; ++round) {
        bool changed = false;
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y = 0; y < n; ++y) {
                if (x == y) continue;
                if (dist(pat.points[x], pat.points[y]) > rho) continue;
                if (!(norm2(pat.points[y]) < norm2(pat.points[x]))) continue;
                if (hop[y] + 1 < hop[x]) {
                    hop[x] = hop[y] + 1;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
    return hop;
}

// directed crossing predicate written independently of segment_crossing
inline bool directed_segment_hits(Point a, Point b, Point sx, double g) {
    double c = sx.x;
    if (!(a.x <= c && c < b.x)) return false;
    double t = (c - a.x) / (b.x - a.x);
    double y = a.y + t * (b.y - a.y);
    double z = a.z + t * (b.z - a.z);
    double dy = y - sx.y, dz = z - sx.z;
    return std::sqrt(dy * dy + dz * dz) <= g;
}

// number of sphere-intersection parameters of [a,b) in [0,1); 1 means a
// transversal crossing with a unique parameter, 2 a chord dip
inline int sphere_crossing_parameters(Point a, Point b, double R) {
    Point d = b - a;
    double A = norm2(d);
    double B = 2.0 * dot(a, d);
    double C = norm2(a) - R * R;
    double disc = B * B - 4.0 * A * C;
    if (disc < 0 || A == 0) return 0;
    double sq = std::sqrt(disc);
    double q = B >= 0 ? -0.5 * (B + sq) : -0.5 * (B - sq);
    double t1 = q / A;
    double t2 = q != 0 ? C / q : t1;
    int count = 0;
    if (t1 >= 0 && t1 < 1) ++count;
    if (t2 != t1 && t2 >= 0 && t2 < 1) ++count;
    return count;
}

}  // namespace oracles
