#include "explore/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace explore {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool ground_truth_blocked(const GridMap& map, Point2 p) {
    if (!map.contains(p)) return true;
    return map.occupied(map.cell_at(p));
}

// True when the straight move from a to b stays in free space.
bool move_clear(const GridMap& map, Point2 a, Point2 b) {
    if (!map.contains(b)) return false;
    for (const Cell& c : map.traverse_ray(a, b))
        if (map.occupied(c)) return false;
    return true;
}

// Dijkstra over the line-of-sight graph of `points`, used to expand a
// metric-closure leg into the via points actually travelled.
std::vector<int> los_graph_route(const std::vector<Point2>& points, const GridMap& map,
                                 int from, int to) {
    const int n = static_cast<int>(points.size());
    std::vector<double> dist(n, kInf);
    std::vector<int> prev(n, -1);
    std::vector<char> done(n, 0);
    dist[from] = 0.0;
    for (int iter = 0; iter < n; ++iter) {
        int u = -1;
        double best = kInf;
        for (int i = 0; i < n; ++i)
            if (!done[i] && dist[i] < best) {
                best = dist[i];
                u = i;
            }
        if (u < 0) break;
        done[u] = 1;
        if (u == to) break;
        for (int v = 0; v < n; ++v) {
            if (done[v]) continue;
            if (!map.line_of_sight(points[u], points[v])) continue;
            const double nd = dist[u] + distance(points[u], points[v]);
            if (nd < dist[v]) {
                dist[v] = nd;
                prev[v] = u;
            }
        }
    }
    std::vector<int> route;
    if (!std::isfinite(dist[to])) return route;
    for (int v = to; v != -1; v = prev[v]) route.push_back(v);
    std::reverse(route.begin(), route.end());
    return route;
}

}  // namespace

VoronoiPartition voronoi_partition(const GridMap& map, const WaypointSet& wps, double R) {
    VoronoiPartition part;
    part.owner.assign(static_cast<size_t>(map.cell_count()), -1);
    const double r2 = R * R;
    for (int row = 0; row < map.height(); ++row) {
        for (int col = 0; col < map.width(); ++col) {
            const Cell cell{row, col};
            if (map.occupied(cell)) continue;
            const Point2 center = map.center_of(cell);
            int owner = -1;
            double best = kInf;
            for (size_t i = 0; i < wps.positions.size(); ++i) {
                const double d2 = squared_distance(wps.positions[i], center);
                if (d2 > r2 || d2 >= best) continue;
                if (!map.line_of_sight(wps.positions[i], center)) continue;
                best = d2;
                owner = static_cast<int>(i);
            }
            part.owner[row * map.width() + col] = owner;
        }
    }
    return part;
}

std::vector<uint8_t> free_arc_mask(int wp_index, const WaypointSet& wps,
                                   const GridMap& map, double R,
                                   const FreeArcParams& fp) {
    const Point2 wp = wps.positions[wp_index];
    std::vector<uint8_t> mask(fp.segments_per_circle, 0);
    const double r2 = R * R;
    for (int s = 0; s < fp.segments_per_circle; ++s) {
        const double angle = 2.0 * M_PI * (s + 0.5) / fp.segments_per_circle;
        const Point2 p{wp.x + R * std::cos(angle), wp.y + R * std::sin(angle)};
        if (!map.contains(p)) continue;
        if (map.occupied(map.cell_at(p))) continue;
        if (!map.line_of_sight(wp, p)) continue;
        bool ceded = false;
        for (size_t j = 0; j < wps.positions.size() && !ceded; ++j) {
            if (static_cast<int>(j) == wp_index) continue;
            if (squared_distance(wps.positions[j], p) < r2 &&
                map.line_of_sight(wps.positions[j], p))
                ceded = true;
        }
        mask[s] = !ceded;
    }
    return mask;
}

Point2 arc_velocity_from_mask(const std::vector<uint8_t>& eligible, double R,
                              const FreeArcParams& fp) {
    const int n = static_cast<int>(eligible.size());
    const double dq = 2.0 * M_PI * R / n;
    Point2 v{0.0, 0.0};
    for (int s = 0; s < n; ++s) {
        if (!eligible[s]) continue;
        const double angle = 2.0 * M_PI * (s + 0.5) / n;
        v.x += fp.phi * std::cos(angle) * dq;
        v.y += fp.phi * std::sin(angle) * dq;
    }
    return v;
}

Point2 free_arc_velocity(int wp_index, const WaypointSet& wps, const GridMap& map,
                         double R, const FreeArcParams& fp) {
    return arc_velocity_from_mask(free_arc_mask(wp_index, wps, map, R, fp), R, fp);
}

WaypointSet optimize_waypoints(const GridMap& map, int n_wp, int n_gen, double R,
                               const FreeArcParams& fp, const RrtParams& rrt, Rng& rng) {
    std::vector<CellIndex> free_cells;
    for (CellIndex j = 1; j <= map.cell_count(); ++j)
        if (!map.occupied(j)) free_cells.push_back(j);
    if (n_wp > static_cast<int>(free_cells.size()))
        throw UnsolvableError("more waypoints than free cells");

    // Partial Fisher-Yates: n_wp distinct free cells.
    WaypointSet wps;
    for (int i = 0; i < n_wp; ++i) {
        std::uniform_int_distribution<size_t> pick(i, free_cells.size() - 1);
        std::swap(free_cells[i], free_cells[pick(rng)]);
        wps.positions.push_back(map.center_of(free_cells[i]));
    }

    const ObstaclePredicate blocked = [&map](Point2 p) {
        return ground_truth_blocked(map, p);
    };
    const Point2 lo{0.0, 0.0};
    const Point2 hi{static_cast<double>(map.width()), static_cast<double>(map.height())};

    for (int gen = 1; gen <= n_gen; ++gen) {
        const WaypointSet snapshot = wps;
        for (size_t i = 0; i < wps.positions.size(); ++i) {
            const Point2 v = free_arc_velocity(static_cast<int>(i), snapshot, map, R, fp);
            Point2 disp{fp.step_gain * v.x, fp.step_gain * v.y};
            const double mag = std::hypot(disp.x, disp.y);
            if (mag < 1e-12) continue;
            if (mag > fp.step_clamp) disp = (fp.step_clamp / mag) * disp;
            const Point2 target = snapshot.positions[i] + disp;
            if (move_clear(map, snapshot.positions[i], target)) {
                wps.positions[i] = target;
            } else {
                const auto path = rrt_star(snapshot.positions[i], target, blocked,
                                           lo, hi, rrt, rng);
                if (path && path->size() >= 2) wps.positions[i] = (*path)[1];
            }
        }
        wps.generation = gen;
    }
    return wps;
}

PosteriorSolution solve_posterior(const GridMap& map, Point2 z_init, int n_wp,
                                  int n_gen, double R, const FreeArcParams& fp,
                                  const RrtParams& rrt, Rng& rng) {
    if (!map.contains(z_init) || map.occupied(map.cell_at(z_init)))
        throw SimulationError("posterior start is not in a free cell");

    constexpr int kMaxRestarts = 3;
    for (int attempt = 0; attempt <= kMaxRestarts; ++attempt) {
        const int wanted = n_wp + 2 * attempt;
        WaypointSet wps = optimize_waypoints(map, wanted, n_gen, R, fp, rrt, rng);

        std::vector<Point2> vertices{z_init};
        vertices.insert(vertices.end(), wps.positions.begin(), wps.positions.end());
        const DistanceMatrix dm = metric_closure(vertices, map);
        if (!dm.all_finite()) continue;

        PosteriorSolution sol;
        sol.waypoints = std::move(wps);
        sol.tour = open_path_best_destination(z_init, sol.waypoints.positions, dm);

        sol.path.push_back(z_init);
        int prev = 0;
        for (int idx : sol.tour.order) {
            const int vertex = idx + 1;
            if (map.line_of_sight(vertices[prev], vertices[vertex])) {
                sol.path.push_back(vertices[vertex]);
            } else {
                const auto route = los_graph_route(vertices, map, prev, vertex);
                for (size_t r = 1; r < route.size(); ++r)
                    sol.path.push_back(vertices[route[r]]);
            }
            prev = vertex;
        }
        for (size_t i = 1; i < sol.path.size(); ++i)
            sol.path_length += distance(sol.path[i - 1], sol.path[i]);
        return sol;
    }
    throw UnsolvableError("visibility graph still disconnected after restarts");
}

OcpEvaluation evaluate_ocp(const std::vector<Point2>& path, const GridMap& map,
                           double R, const OcpWeights& w) {
    OcpEvaluation eval;
    std::set<CellIndex> covered;
    double sum = 0.0;
    for (size_t k = 1; k < path.size(); ++k) {
        const auto sur = scan_ideal(map, path[k], R);
        int fresh = 0;
        for (CellIndex j : sur) fresh += covered.insert(j).second ? 1 : 0;
        const double f_i = static_cast<double>(fresh);
        const double f_d = squared_distance(path[k - 1], path[k]);
        eval.info_terms.push_back(f_i);
        eval.dist_terms.push_back(f_d);
        sum += w.alpha * f_i - w.beta * f_d;
    }
    const double n_steps = static_cast<double>(path.empty() ? 0 : path.size() - 1);
    eval.covered_cells = static_cast<int>(covered.size());
    eval.objective = sum - w.mu * n_steps + w.gamma * eval.covered_cells;
    return eval;
}

}  // namespace explore
