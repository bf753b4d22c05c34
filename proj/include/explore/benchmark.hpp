#pragma once

#include <vector>

#include "explore/plan.hpp"
#include "explore/sensing.hpp"
#include "explore/world.hpp"

namespace explore {

struct UnsolvableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WaypointSet {
    std::vector<Point2> positions;
    int generation = 0;
};

/// Per-cell owner: index into the waypoint set, or -1 when no waypoint
/// sees the cell within range.
struct VoronoiPartition {
    std::vector<int> owner;
};

struct FreeArcParams {
    int segments_per_circle = 72;  ///< dq = 2*pi*R / segments
    double phi = 1.0;              ///< per-segment gain
    double step_gain = 0.25;       ///< displacement per unit velocity, cell widths
    double step_clamp = 0.5;       ///< max displacement per generation, cell widths
};

struct OcpWeights {
    double alpha = 1.0;   ///< covered-cells term
    double beta = 0.1;    ///< squared step length penalty
    double mu = 0.01;     ///< step count penalty
    double gamma = 1.0;   ///< final map size reward
};

/// Assigns every free cell whose center is both within R of and visible
/// from at least one waypoint to the nearest such waypoint (ties to the
/// lower index).
VoronoiPartition voronoi_partition(const GridMap& map, const WaypointSet& wps, double R);

/// Eligibility of each of the segments of the sensing circle around one
/// waypoint: the midpoint must lie inside the map, in a free cell, visible
/// from the waypoint, and not strictly closer to another waypoint that
/// sees it.
std::vector<uint8_t> free_arc_mask(int wp_index, const WaypointSet& wps,
                                   const GridMap& map, double R,
                                   const FreeArcParams& fp);

/// Sum of phi * n_i * dq over eligible segments, n_i the outward unit
/// radial at the segment midpoint.
Point2 arc_velocity_from_mask(const std::vector<uint8_t>& eligible, double R,
                              const FreeArcParams& fp);

/// Free-arc coverage velocity of one waypoint (mask + integration).
Point2 free_arc_velocity(int wp_index, const WaypointSet& wps, const GridMap& map,
                         double R, const FreeArcParams& fp);

/// Seeds N_wp waypoints uniformly over distinct free cells, then runs
/// N_gen generations of free-arc moves. A move that would cross or land in
/// an obstacle is routed with RRT* and takes its first vertex; if no route
/// exists the waypoint stays put.
WaypointSet optimize_waypoints(const GridMap& map, int n_wp, int n_gen, double R,
                               const FreeArcParams& fp, const RrtParams& rrt, Rng& rng);

struct PosteriorSolution {
    WaypointSet waypoints;
    Tour tour;                    ///< order over waypoints, start at z_init
    std::vector<Point2> path;     ///< z_init + waypoints in visit order with
                                  ///< line-of-sight via points inserted
    double path_length = 0.0;     ///< cell widths
};

/// Full benchmark solve: optimize waypoints, build the metric closure over
/// start plus waypoints, retry with two extra waypoints (up to three
/// restarts) while the graph is disconnected, then take the best open
/// path. Throws UnsolvableError when still disconnected.
PosteriorSolution solve_posterior(const GridMap& map, Point2 z_init, int n_wp,
                                  int n_gen, double R, const FreeArcParams& fp,
                                  const RrtParams& rrt, Rng& rng);

struct OcpEvaluation {
    double objective = 0.0;          ///< J
    std::vector<double> info_terms;  ///< f_I per step
    std::vector<double> dist_terms;  ///< f_d per step
    int covered_cells = 0;           ///< |M_N|
};

/// Evaluates the remapping objective along a pose sequence: newly covered
/// cells per step (ideal sensor), squared step lengths, step count and
/// final map size, combined with the given weights.
OcpEvaluation evaluate_ocp(const std::vector<Point2>& path, const GridMap& map,
                           double R, const OcpWeights& w);

}  // namespace explore
