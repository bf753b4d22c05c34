#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "explore/sensing.hpp"
#include "explore/world.hpp"

namespace explore {

struct PlanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Symmetric nonnegative distance matrix with zero diagonal. Entries may
/// be +inf for disconnected pairs.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(int n)
        : n_(n), d_(static_cast<size_t>(n) * n, 0.0) {}

    int size() const { return n_; }
    double at(int i, int j) const { return d_[static_cast<size_t>(i) * n_ + j]; }
    void set(int i, int j, double v) {
        d_[static_cast<size_t>(i) * n_ + j] = v;
        d_[static_cast<size_t>(j) * n_ + i] = v;
    }
    bool all_finite() const;

private:
    int n_ = 0;
    std::vector<double> d_;
};

/// Visit order over the input points (0-based indices, start excluded).
struct Tour {
    std::vector<int> order;
    double total_length = 0.0;
    bool closed = false;
    bool exact = true;
};

struct RrtParams {
    double step_size = 0.5;          ///< cell widths
    double goal_bias = 0.1;
    int max_iterations = 3000;
    double rewire_radius = 1.5;      ///< cell widths
    double occupancy_threshold = 0.8;
};

/// Number of points up to which the tour solvers run the exact
/// dynamic program; larger instances fall back to nearest-neighbor
/// plus 2-opt and clear Tour::exact.
constexpr int kExactTourLimit = 12;
constexpr int kExactPathLimit = 13;

/// Minimum-length closed tour start -> all points -> start under the
/// Euclidean metric. Ties resolve to the lexicographically smallest
/// visit order. Throws PlanError on an empty point list.
Tour closed_tour(Point2 start, const std::vector<Point2>& points);

/// Shortest open Hamiltonian path from the start through every waypoint,
/// minimized over the choice of final vertex. Distances come from `dm`
/// where index 0 is the start and i+1 is waypoints[i]. Throws PlanError
/// when the matrix has infinite entries (disconnected graph).
Tour open_path_best_destination(Point2 start, const std::vector<Point2>& waypoints,
                                const DistanceMatrix& dm);

/// The nearest-neighbor + 2-opt fallback on its own, for cross-checks
/// against the exact solver.
Tour closed_tour_heuristic(Point2 start, const std::vector<Point2>& points);
Tour open_path_heuristic(const DistanceMatrix& dm);

/// Matrix of shortest distances: direct line-of-sight pairs get their
/// Euclidean distance, the rest all-pairs shortest paths through the
/// line-of-sight graph; unreachable pairs stay +inf.
DistanceMatrix metric_closure(const std::vector<Point2>& points, const GridMap& map);

using ObstaclePredicate = std::function<bool(Point2)>;

/// RRT* over the rectangle [lo, hi]: samples with goal bias, steers by
/// step_size, picks the min-cost parent within rewire_radius and rewires
/// neighbors through cheaper new nodes. Segments are collision-checked at
/// step_size/4 granularity. Returns the start->goal polyline, or nullopt
/// when the start or goal is blocked or max_iterations pass without a
/// connection.
std::optional<std::vector<Point2>> rrt_star(Point2 start, Point2 goal,
                                            const ObstaclePredicate& obstacle,
                                            Point2 lo, Point2 hi,
                                            const RrtParams& params, Rng& rng);

}  // namespace explore
