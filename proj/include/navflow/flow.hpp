#pragma once

#include <optional>
#include <span>
#include <utility>

#include "navflow/navigation.hpp"

namespace navflow {

// Iterated successors of `start`, inclusive of a terminating dead-end node;
// an origin sink terminates the walk without appearing (only pattern nodes).
std::vector<std::int32_t> trajectory(std::int32_t start, const NavigationForest& forest);

// Subtree rate sums: delta[i] = rates[i] + sum of delta over predecessors,
// computed in one topological pass (by pi1 for directed forests, by norm
// descending for radial ones).
std::vector<double> accumulate_traffic(const NavigationForest& forest, const PointPattern& pattern,
                                       std::span<const double> rates);

struct CrossingSet {
    std::vector<std::pair<std::int32_t, Point>> members;  // (node, intersection)
};

// Nodes whose link segment [X_i, A(X_i)] crosses the surface; dead ends never
// appear. Radial origin-sink links are tested as segments to the origin.
CrossingSet crossing_set(const NavigationForest& forest, const PointPattern& pattern,
                         const CrossingSurface& surface);

enum class ContainmentKind { NodeSet, Interpolated };

struct EventReport {
    bool no_dead_ends_in_interior = true;
    bool cylinder_containment = true;
    std::vector<std::int32_t> violating;

    bool pass() const { return no_dead_ends_in_interior && cylinder_containment; }
};

// Directed mode: flags dead ends inside the eps-eroded scaled domain and any
// node whose trajectory (clipped to that region) leaves the h-cylinder around
// its own horizontal line; interpolated trajectories are tested on the clipped
// endpoints of every segment, which is exact since the cylinders are convex.
// Radial mode: flags nodes whose trajectory leaves the h-cylinder directed
// towards the origin; node and interpolated containment coincide there because
// segment endpoints are exactly the trajectory nodes and the origin.
EventReport check_events(const NavigationForest& forest, const PointPattern& pattern, double eps,
                         double h, std::optional<ContainmentKind> kind = std::nullopt);

// Per-node maximum deviation of the trajectory from the node's own axis
// (horizontal line in directed mode, ray towards the origin in radial mode).
std::vector<double> max_deviation(const NavigationForest& forest, const PointPattern& pattern);

// The deviation quantity behind the sub-ballisticity event: directed mode
// measures interpolated trajectories clipped to the eps-eroded scaled domain,
// which excludes the uncontrolled funnel towards the right boundary; radial
// trajectories need no clipping and give the same values as max_deviation.
std::vector<double> max_deviation_clipped(const NavigationForest& forest,
                                          const PointPattern& pattern, double eps);

}  // namespace navflow
