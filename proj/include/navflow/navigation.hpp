#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "navflow/pointprocess.hpp"

namespace navflow {

inline constexpr std::int32_t kDeadEnd = -1;
inline constexpr std::int32_t kOriginSink = -2;

enum class SchemeKind {
    DirectedSpanningTree,
    ConeDirected,
    RadialSpanningTree,
    ConeRadial,
    MinHopBoundedRadial,
};

struct NavigationScheme {
    SchemeKind kind = SchemeKind::DirectedSpanningTree;
    double half_angle = 0.0;  // cone schemes, in (0, pi/2]
    double range = 0.0;       // min-hop bounded range rho > 0

    static NavigationScheme dst() { return {SchemeKind::DirectedSpanningTree, 0.0, 0.0}; }
    static NavigationScheme cone_directed(double theta) {
        return {SchemeKind::ConeDirected, theta, 0.0};
    }
    static NavigationScheme rst() { return {SchemeKind::RadialSpanningTree, 0.0, 0.0}; }
    static NavigationScheme cone_radial(double theta) {
        return {SchemeKind::ConeRadial, theta, 0.0};
    }
    static NavigationScheme min_hop(double rho) {
        return {SchemeKind::MinHopBoundedRadial, 0.0, rho};
    }

    bool radial() const {
        return kind == SchemeKind::RadialSpanningTree || kind == SchemeKind::ConeRadial ||
               kind == SchemeKind::MinHopBoundedRadial;
    }
};

enum class ForestMode { Directed, Radial };

// Per-node successor assignment. successor[i] is a node index, kDeadEnd for a
// node without admissible successor, or kOriginSink when the next hop is the
// origin itself.
struct NavigationForest {
    std::vector<std::int32_t> successor;
    ForestMode mode = ForestMode::Directed;

    std::size_t size() const { return successor.size(); }
};

// Candidate arbitration shared by every successor rule: smallest squared
// distance, ties by lexicographically smallest point, then smallest index.
struct NearestCandidate {
    double d2 = std::numeric_limits<double>::infinity();
    Point p;
    std::int32_t idx = kDeadEnd;
};

inline bool improves(double d2, Point p, std::int32_t idx, const NearestCandidate& best) {
    if (d2 != best.d2) return d2 < best.d2;
    if (!(p == best.p)) return lex_less(p, best.p);
    return idx < best.idx;
}

// Definitional per-node successor rules (full scans). These are the reference
// semantics; build_forest must reproduce them bit-identically via the index.
std::int32_t dst_successor(std::size_t i, const PointPattern& pattern);
std::int32_t cone_directed_successor(std::size_t i, const PointPattern& pattern, double theta);
std::int32_t rst_successor(std::size_t i, const PointPattern& pattern);
std::int32_t cone_radial_successor(std::size_t i, const PointPattern& pattern, double theta);

// Breadth-first min-hop routing towards the origin over edges x->y with
// |x-y| <= rho and |y| < |x|; unreachable nodes become dead ends. Parent
// choice: smallest |parent|, then lexicographic.
NavigationForest min_hop_bounded_forest(const PointPattern& pattern, double rho);

NavigationForest build_forest(const PointPattern& pattern, const NavigationScheme& scheme);

// Uniform grid over the scaled domain with expanding-ring nearest queries.
class UniformGridIndex {
  public:
    explicit UniformGridIndex(const PointPattern& pattern);

    // Nearest admissible point: Pred(idx) filters candidates, `self` is always
    // skipped, `init` seeds the search (the origin candidate in radial rules).
    template <class Pred>
    NearestCandidate nearest(Point q, std::int32_t self, NearestCandidate init, Pred pred) const {
        NearestCandidate best = init;
        if (pts_->empty()) return best;
        int c[3];
        cell_of(q, c);
        for (int k = 0;; ++k) {
            bool any_cell = visit_ring(c, k, [&](std::int32_t lo, std::int32_t hi) {
                for (std::int32_t it = lo; it < hi; ++it) {
                    std::int32_t j = items_[it];
                    if (j == self || !pred(j)) continue;
                    Point p = (*pts_)[j];
                    double d2 = dist2(p, q);
                    if (improves(d2, p, j, best)) best = {d2, p, j};
                }
            });
            double reach = static_cast<double>(k) * cell_;
            if (best.idx != kDeadEnd && best.d2 < reach * reach) break;
            if (!any_cell && covered(c, k)) break;
        }
        return best;
    }

    template <class Fn>
    void for_ball(Point center, double radius, Fn fn) const {
        if (pts_->empty()) return;
        int lo[3], hi[3];
        range_of(center, radius, lo, hi);
        double r2 = radius * radius;
        for (int cz = lo[2]; cz <= hi[2]; ++cz)
            for (int cy = lo[1]; cy <= hi[1]; ++cy)
                for (int cx = lo[0]; cx <= hi[0]; ++cx) {
                    std::int32_t a = start_[flat(cx, cy, cz)];
                    std::int32_t b = start_[flat(cx, cy, cz) + 1];
                    for (std::int32_t it = a; it < b; ++it) {
                        std::int32_t j = items_[it];
                        if (dist2((*pts_)[j], center) <= r2) fn(j);
                    }
                }
    }

  private:
    const std::vector<Point>* pts_;
    int dim_;
    double cell_;
    int n_[3];
    Point lo_;
    std::vector<std::int32_t> start_;
    std::vector<std::int32_t> items_;

    std::size_t flat(int cx, int cy, int cz) const {
        return (static_cast<std::size_t>(cz) * n_[1] + cy) * n_[0] + cx;
    }
    void cell_of(Point p, int c[3]) const;
    void range_of(Point center, double radius, int lo[3], int hi[3]) const;
    bool covered(const int c[3], int k) const;

    // Applies fn to the item range of every grid cell at Chebyshev cell
    // distance exactly k; returns whether any cell was inside the grid.
    template <class Fn>
    bool visit_ring(const int c[3], int k, Fn fn) const {
        bool any = false;
        auto cell_fn = [&](int cx, int cy, int cz) {
            if (cx < 0 || cx >= n_[0] || cy < 0 || cy >= n_[1] || cz < 0 || cz >= n_[2]) return;
            any = true;
            std::size_t f = flat(cx, cy, cz);
            fn(start_[f], start_[f + 1]);
        };
        if (k == 0) {
            cell_fn(c[0], c[1], c[2]);
            return any;
        }
        auto square_ring = [&](int cz) {
            for (int dx = -k; dx <= k; ++dx) {
                cell_fn(c[0] + dx, c[1] - k, cz);
                cell_fn(c[0] + dx, c[1] + k, cz);
            }
            for (int dy = -k + 1; dy <= k - 1; ++dy) {
                cell_fn(c[0] - k, c[1] + dy, cz);
                cell_fn(c[0] + k, c[1] + dy, cz);
            }
        };
        auto square_full = [&](int cz) {
            for (int dy = -k; dy <= k; ++dy)
                for (int dx = -k; dx <= k; ++dx) cell_fn(c[0] + dx, c[1] + dy, cz);
        };
        if (dim_ == 2) {
            square_ring(c[2]);
        } else {
            square_full(c[2] - k);
            square_full(c[2] + k);
            for (int dz = -k + 1; dz <= k - 1; ++dz) square_ring(c[2] + dz);
        }
        return any;
    }
};

}  // namespace navflow
