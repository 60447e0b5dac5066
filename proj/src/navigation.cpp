#include "navflow/navigation.hpp"

#include <algorithm>
#include <cmath>

namespace navflow {

namespace {

constexpr double kPiHalf = 1.57079632679489661923;

double angle_from_e1(Point v) { return std::atan2(perp_norm_e1(v), v.x); }

double angle_from_axis(Point v, Point axis_unit) {
    double u = dot(v, axis_unit);
    Point w = v - u * axis_unit;
    return std::atan2(norm(w), u);
}

void check_theta(double theta) {
    if (!(theta > 0 && theta <= kPiHalf + 1e-15))
        throw error("cone navigation: half angle must lie in (0, pi/2]");
}

template <class Pred>
std::int32_t nearest_brute(const PointPattern& pat, std::size_t i, NearestCandidate best,
                           Pred pred) {
    Point q = pat.points[i];
    for (std::size_t j = 0; j < pat.points.size(); ++j) {
        if (j == i || !pred(static_cast<std::int32_t>(j))) continue;
        Point p = pat.points[j];
        double d2 = dist2(p, q);
        if (improves(d2, p, static_cast<std::int32_t>(j), best)) {
            best = {d2, p, static_cast<std::int32_t>(j)};
        }
    }
    return best.idx;
}

NearestCandidate origin_candidate(Point q) {
    return {norm2(q), Point{}, kOriginSink};
}

}  // namespace

std::int32_t dst_successor(std::size_t i, const PointPattern& pat) {
    Point q = pat.points[i];
    return nearest_brute(pat, i, NearestCandidate{},
                         [&](std::int32_t j) { return pat.points[j].x > q.x; });
}

std::int32_t cone_directed_successor(std::size_t i, const PointPattern& pat, double theta) {
    check_theta(theta);
    Point q = pat.points[i];
    return nearest_brute(pat, i, NearestCandidate{}, [&](std::int32_t j) {
        Point p = pat.points[j];
        return p.x > q.x && angle_from_e1(p - q) <= theta;
    });
}

std::int32_t rst_successor(std::size_t i, const PointPattern& pat) {
    Point q = pat.points[i];
    if (norm2(q) == 0) throw error("rst_successor: node at the origin");
    double nq = norm2(q);
    return nearest_brute(pat, i, origin_candidate(q),
                         [&](std::int32_t j) { return norm2(pat.points[j]) < nq; });
}

std::int32_t cone_radial_successor(std::size_t i, const PointPattern& pat, double theta) {
    check_theta(theta);
    Point q = pat.points[i];
    if (norm2(q) == 0) throw error("cone_radial_successor: node at the origin");
    double nq = norm2(q);
    Point axis = (-1.0 / norm(q)) * q;
    return nearest_brute(pat, i, origin_candidate(q), [&](std::int32_t j) {
        Point p = pat.points[j];
        return norm2(p) < nq && angle_from_axis(p - q, axis) <= theta;
    });
}

UniformGridIndex::UniformGridIndex(const PointPattern& pattern) : pts_(&pattern.points) {
    dim_ = pattern.domain.dim();
    Domain scaled = pattern.domain.scaled(pattern.scale);
    Point h = scaled.bbox_half_widths();
    lo_ = {-h.x, -h.y, dim_ == 3 ? -h.z : 0.0};
    std::size_t n = pts_->size();
    double volume = scaled.volume();
    cell_ = n > 0 ? 2.0 * std::pow(volume / static_cast<double>(n), 1.0 / dim_)
                  : 2.0 * scaled.circumradius();
    n_[0] = std::max(1, static_cast<int>(std::ceil(2.0 * h.x / cell_)));
    n_[1] = std::max(1, static_cast<int>(std::ceil(2.0 * h.y / cell_)));
    n_[2] = dim_ == 3 ? std::max(1, static_cast<int>(std::ceil(2.0 * h.z / cell_))) : 1;

    std::size_t cells = static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
    start_.assign(cells + 1, 0);
    std::vector<std::int32_t> cell_idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        int c[3];
        cell_of((*pts_)[i], c);
        cell_idx[i] = static_cast<std::int32_t>(flat(c[0], c[1], c[2]));
        ++start_[cell_idx[i] + 1];
    }
    for (std::size_t c = 0; c < cells; ++c) start_[c + 1] += start_[c];
    items_.resize(n);
    std::vector<std::int32_t> cursor(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) items_[cursor[cell_idx[i]]++] = static_cast<std::int32_t>(i);
}

void UniformGridIndex::cell_of(Point p, int c[3]) const {
    auto idx = [&](double v, double lo, int count) {
        int i = static_cast<int>((v - lo) / cell_);
        return std::clamp(i, 0, count - 1);
    };
    c[0] = idx(p.x, lo_.x, n_[0]);
    c[1] = idx(p.y, lo_.y, n_[1]);
    c[2] = dim_ == 3 ? idx(p.z, lo_.z, n_[2]) : 0;
}

void UniformGridIndex::range_of(Point center, double radius, int lo[3], int hi[3]) const {
    int a[3], b[3];
    cell_of({center.x - radius, center.y - radius, center.z - radius}, a);
    cell_of({center.x + radius, center.y + radius, center.z + radius}, b);
    for (int k = 0; k < 3; ++k) {
        lo[k] = a[k];
        hi[k] = b[k];
    }
    if (dim_ == 2) lo[2] = hi[2] = 0;
}

bool UniformGridIndex::covered(const int c[3], int k) const {
    bool ok = c[0] - k < 0 && c[0] + k >= n_[0] && c[1] - k < 0 && c[1] + k >= n_[1];
    if (dim_ == 3) ok = ok && c[2] - k < 0 && c[2] + k >= n_[2];
    return ok;
}

NavigationForest min_hop_bounded_forest(const PointPattern& pat, double rho) {
    if (!(rho > 0)) throw error("min_hop: range must be positive");
    std::size_t n = pat.size();
    NavigationForest forest;
    forest.mode = ForestMode::Radial;
    forest.successor.assign(n, kDeadEnd);
    if (n == 0) return forest;

    UniformGridIndex index(pat);
    std::vector<std::int32_t> hop(n, -1);
    std::vector<std::int32_t> frontier, next;
    for (std::size_t i = 0; i < n; ++i) {
        if (norm(pat.points[i]) <= rho) {
            hop[i] = 1;
            forest.successor[i] = kOriginSink;
            frontier.push_back(static_cast<std::int32_t>(i));
        }
    }
    std::int32_t level = 1;
    while (!frontier.empty()) {
        next.clear();
        for (std::int32_t y : frontier) {
            double ny = norm2(pat.points[y]);
            index.for_ball(pat.points[y], rho, [&](std::int32_t x) {
                if (hop[x] != -1) return;
                if (!(norm2(pat.points[x]) > ny)) return;
                hop[x] = level + 1;
                next.push_back(x);
            });
        }
        frontier.swap(next);
        ++level;
    }
    // deterministic parent choice: smallest |parent|, lexicographic, index
    for (std::size_t i = 0; i < n; ++i) {
        if (hop[i] < 2) continue;
        Point q = pat.points[i];
        double nq = norm2(q);
        std::int32_t best = kDeadEnd;
        double best_n2 = 0;
        index.for_ball(q, rho, [&](std::int32_t y) {
            if (static_cast<std::size_t>(y) == i || hop[y] != hop[i] - 1) return;
            Point p = pat.points[y];
            double n2 = norm2(p);
            if (!(n2 < nq)) return;
            if (best == kDeadEnd || n2 < best_n2 ||
                (n2 == best_n2 && lex_less(p, pat.points[best])) ||
                (n2 == best_n2 && p == pat.points[best] && y < best)) {
                best = y;
                best_n2 = n2;
            }
        });
        forest.successor[i] = best;
    }
    return forest;
}

NavigationForest build_forest(const PointPattern& pat, const NavigationScheme& scheme) {
    if (scheme.kind == SchemeKind::MinHopBoundedRadial)
        return min_hop_bounded_forest(pat, scheme.range);

    NavigationForest forest;
    forest.mode = scheme.radial() ? ForestMode::Radial : ForestMode::Directed;
    std::size_t n = pat.size();
    forest.successor.assign(n, kDeadEnd);
    if (n == 0) return forest;
    if (scheme.kind == SchemeKind::ConeDirected || scheme.kind == SchemeKind::ConeRadial)
        check_theta(scheme.half_angle);

    UniformGridIndex index(pat);
    for (std::size_t i = 0; i < n; ++i) {
        Point q = pat.points[i];
        NearestCandidate res;
        switch (scheme.kind) {
            case SchemeKind::DirectedSpanningTree:
                res = index.nearest(q, static_cast<std::int32_t>(i), NearestCandidate{},
                                    [&](std::int32_t j) { return pat.points[j].x > q.x; });
                break;
            case SchemeKind::ConeDirected:
                res = index.nearest(q, static_cast<std::int32_t>(i), NearestCandidate{},
                                    [&](std::int32_t j) {
                                        Point p = pat.points[j];
                                        return p.x > q.x &&
                                               angle_from_e1(p - q) <= scheme.half_angle;
                                    });
                break;
            case SchemeKind::RadialSpanningTree: {
                double nq = norm2(q);
                res = index.nearest(q, static_cast<std::int32_t>(i), origin_candidate(q),
                                    [&](std::int32_t j) { return norm2(pat.points[j]) < nq; });
                break;
            }
            case SchemeKind::ConeRadial: {
                double nq = norm2(q);
                if (nq == 0) throw error("cone_radial: node at the origin");
                Point axis = (-1.0 / norm(q)) * q;
                res = index.nearest(q, static_cast<std::int32_t>(i), origin_candidate(q),
                                    [&](std::int32_t j) {
                                        Point p = pat.points[j];
                                        return norm2(p) < nq &&
                                               angle_from_axis(p - q, axis) <= scheme.half_angle;
                                    });
                break;
            }
            case SchemeKind::MinHopBoundedRadial:
                break;  // handled above
        }
        forest.successor[i] = res.idx;
    }
    return forest;
}

}  // namespace navflow
