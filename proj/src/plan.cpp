#include "explore/plan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace explore {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-12;

// Extra samples spent tightening the solution after the goal is first
// connected; keeps blocked-corridor queries from always burning the full
// iteration budget.
constexpr int kGoalRefineIterations = 300;

double tour_cost(const DistanceMatrix& d, const std::vector<int>& order, bool closed) {
    double cost = 0.0;
    int prev = 0;
    for (int v : order) {
        cost += d.at(prev, v + 1);
        prev = v + 1;
    }
    if (closed) cost += d.at(prev, 0);
    return cost;
}

// Held-Karp over suffix costs: D[mask][j] is the cheapest continuation
// standing at point j with exactly the points in `mask` left to visit
// (plus the return leg when closed). Reconstruction prefers the smallest
// index at every tie, which yields the lexicographically smallest optimal
// order.
Tour solve_exact(const DistanceMatrix& d, bool closed) {
    const int m = d.size() - 1;
    const size_t full = size_t{1} << m;
    std::vector<double> dp(full * m);
    for (int j = 0; j < m; ++j) dp[j] = closed ? d.at(j + 1, 0) : 0.0;
    for (size_t mask = 1; mask < full; ++mask) {
        for (int j = 0; j < m; ++j) {
            if (mask & (size_t{1} << j)) continue;
            double best = kInf;
            for (int k = 0; k < m; ++k) {
                if (!(mask & (size_t{1} << k))) continue;
                const double c = d.at(j + 1, k + 1) + dp[(mask ^ (size_t{1} << k)) * m + k];
                best = std::min(best, c);
            }
            dp[mask * m + j] = best;
        }
    }

    double best = kInf;
    for (int f = 0; f < m; ++f)
        best = std::min(best, d.at(0, f + 1) + dp[((full - 1) ^ (size_t{1} << f)) * m + f]);

    Tour tour;
    tour.closed = closed;
    tour.exact = true;
    size_t mask = full - 1;
    int cur = -1;
    for (int f = 0; f < m; ++f) {
        if (d.at(0, f + 1) + dp[(mask ^ (size_t{1} << f)) * m + f] <= best + kTieTol) {
            cur = f;
            break;
        }
    }
    tour.order.push_back(cur);
    mask ^= size_t{1} << cur;
    while (mask) {
        const double target = dp[mask * m + cur];
        for (int k = 0; k < m; ++k) {
            if (!(mask & (size_t{1} << k))) continue;
            if (d.at(cur + 1, k + 1) + dp[(mask ^ (size_t{1} << k)) * m + k] <= target + kTieTol) {
                tour.order.push_back(k);
                mask ^= size_t{1} << k;
                cur = k;
                break;
            }
        }
    }
    tour.total_length = tour_cost(d, tour.order, closed);
    return tour;
}

Tour solve_heuristic(const DistanceMatrix& d, bool closed) {
    const int m = d.size() - 1;
    Tour tour;
    tour.closed = closed;
    tour.exact = false;

    // Nearest neighbor from the start, lower index on ties.
    std::vector<char> used(m, 0);
    int prev = 0;
    for (int step = 0; step < m; ++step) {
        int pick = -1;
        double bd = kInf;
        for (int k = 0; k < m; ++k) {
            if (used[k]) continue;
            const double c = d.at(prev, k + 1);
            if (c < bd) {
                bd = c;
                pick = k;
            }
        }
        used[pick] = 1;
        tour.order.push_back(pick);
        prev = pick + 1;
    }

    // 2-opt until no improving reversal remains.
    auto& v = tour.order;
    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 0; i < m - 1; ++i) {
            for (int j = i + 1; j < m; ++j) {
                const int before = i == 0 ? 0 : v[i - 1] + 1;
                double delta;
                if (j == m - 1 && !closed) {
                    delta = d.at(before, v[j] + 1) - d.at(before, v[i] + 1);
                } else {
                    const int after = j == m - 1 ? 0 : v[j + 1] + 1;
                    delta = d.at(before, v[j] + 1) + d.at(v[i] + 1, after) -
                            d.at(before, v[i] + 1) - d.at(v[j] + 1, after);
                }
                if (delta < -kTieTol) {
                    std::reverse(v.begin() + i, v.begin() + j + 1);
                    improved = true;
                }
            }
        }
    }
    tour.total_length = tour_cost(d, tour.order, closed);
    return tour;
}

DistanceMatrix euclidean_matrix(Point2 start, const std::vector<Point2>& points) {
    DistanceMatrix d(static_cast<int>(points.size()) + 1);
    for (size_t i = 0; i < points.size(); ++i) {
        d.set(0, static_cast<int>(i) + 1, distance(start, points[i]));
        for (size_t j = i + 1; j < points.size(); ++j)
            d.set(static_cast<int>(i) + 1, static_cast<int>(j) + 1,
                  distance(points[i], points[j]));
    }
    return d;
}

}  // namespace

bool DistanceMatrix::all_finite() const {
    for (double v : d_)
        if (!std::isfinite(v)) return false;
    return true;
}

Tour closed_tour(Point2 start, const std::vector<Point2>& points) {
    if (points.empty()) throw PlanError("closed tour needs at least one point");
    const DistanceMatrix d = euclidean_matrix(start, points);
    if (static_cast<int>(points.size()) <= kExactTourLimit) return solve_exact(d, true);
    return solve_heuristic(d, true);
}

Tour closed_tour_heuristic(Point2 start, const std::vector<Point2>& points) {
    if (points.empty()) throw PlanError("closed tour needs at least one point");
    return solve_heuristic(euclidean_matrix(start, points), true);
}

Tour open_path_heuristic(const DistanceMatrix& dm) {
    if (dm.size() < 2) throw PlanError("open path needs at least one waypoint");
    return solve_heuristic(dm, false);
}

Tour open_path_best_destination(Point2, const std::vector<Point2>& waypoints,
                                const DistanceMatrix& dm) {
    if (waypoints.empty()) throw PlanError("open path needs at least one waypoint");
    if (dm.size() != static_cast<int>(waypoints.size()) + 1)
        throw PlanError("distance matrix does not cover start plus waypoints");
    if (!dm.all_finite())
        throw PlanError("disconnected visibility graph: add waypoints and retry");
    if (dm.size() <= kExactPathLimit) return solve_exact(dm, false);
    return solve_heuristic(dm, false);
}

DistanceMatrix metric_closure(const std::vector<Point2>& points, const GridMap& map) {
    const int n = static_cast<int>(points.size());
    DistanceMatrix d(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double e = map.line_of_sight(points[i], points[j])
                                 ? distance(points[i], points[j])
                                 : kInf;
            d.set(i, j, e);
        }
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            if (!std::isfinite(d.at(i, k))) continue;
            for (int j = 0; j < n; ++j) {
                const double via = d.at(i, k) + d.at(k, j);
                if (via < d.at(i, j)) d.set(i, j, via);
            }
        }
    return d;
}

std::optional<std::vector<Point2>> rrt_star(Point2 start, Point2 goal,
                                            const ObstaclePredicate& obstacle,
                                            Point2 lo, Point2 hi,
                                            const RrtParams& params, Rng& rng) {
    if (obstacle(start) || obstacle(goal)) return std::nullopt;
    if (squared_distance(start, goal) == 0.0) return std::vector<Point2>{start, goal};

    struct Node {
        Point2 p;
        int parent;
        double cost;
    };
    std::vector<Node> nodes{{start, -1, 0.0}};
    std::vector<std::vector<int>> children(1);

    const auto segment_free = [&](Point2 a, Point2 b) {
        const double len = distance(a, b);
        const int steps = std::max(1, static_cast<int>(std::ceil(len / (params.step_size / 4.0))));
        for (int s = 0; s <= steps; ++s) {
            const double t = static_cast<double>(s) / steps;
            if (obstacle({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)})) return false;
        }
        return true;
    };

    const auto propagate_cost = [&](int root, double delta) {
        std::vector<int> stack{root};
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            nodes[i].cost += delta;
            for (int c : children[i]) stack.push_back(c);
        }
    };

    std::uniform_real_distribution<double> ux(lo.x, hi.x);
    std::uniform_real_distribution<double> uy(lo.y, hi.y);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    const double direct = distance(start, goal);
    int best_goal_parent = -1;
    double best_goal_cost = kInf;
    int refine_left = -1;

    for (int it = 0; it < params.max_iterations; ++it) {
        if (refine_left == 0) break;
        if (refine_left > 0) --refine_left;

        const Point2 sample =
            coin(rng) < params.goal_bias ? goal : Point2{ux(rng), uy(rng)};

        int nearest = 0;
        double nd2 = kInf;
        for (size_t i = 0; i < nodes.size(); ++i) {
            const double d2 = squared_distance(nodes[i].p, sample);
            if (d2 < nd2) {
                nd2 = d2;
                nearest = static_cast<int>(i);
            }
        }
        const Point2 from = nodes[nearest].p;
        const double dist_to_sample = std::sqrt(nd2);
        Point2 candidate = sample;
        if (dist_to_sample > params.step_size)
            candidate = from + (params.step_size / dist_to_sample) * (sample - from);
        if (obstacle(candidate)) continue;

        std::vector<int> near;
        for (size_t i = 0; i < nodes.size(); ++i)
            if (distance(nodes[i].p, candidate) <= params.rewire_radius)
                near.push_back(static_cast<int>(i));
        if (near.empty()) near.push_back(nearest);

        std::sort(near.begin(), near.end(), [&](int a, int b) {
            return nodes[a].cost + distance(nodes[a].p, candidate) <
                   nodes[b].cost + distance(nodes[b].p, candidate);
        });
        int parent = -1;
        double cost = kInf;
        for (int i : near) {
            const double c = nodes[i].cost + distance(nodes[i].p, candidate);
            if (c >= cost) break;
            if (segment_free(nodes[i].p, candidate)) {
                parent = i;
                cost = c;
                break;
            }
        }
        if (parent < 0) continue;

        nodes.push_back({candidate, parent, cost});
        children.emplace_back();
        const int ni = static_cast<int>(nodes.size()) - 1;
        children[parent].push_back(ni);

        for (int i : near) {
            if (i == parent || i == 0) continue;
            const double via = cost + distance(candidate, nodes[i].p);
            if (via + kTieTol < nodes[i].cost && segment_free(candidate, nodes[i].p)) {
                auto& old = children[nodes[i].parent];
                old.erase(std::find(old.begin(), old.end(), i));
                const double delta = via - nodes[i].cost;
                nodes[i].parent = ni;
                children[ni].push_back(i);
                propagate_cost(i, delta);
            }
        }

        const double gd = distance(candidate, goal);
        if (gd <= params.step_size && segment_free(candidate, goal)) {
            if (cost + gd < best_goal_cost) {
                best_goal_cost = cost + gd;
                best_goal_parent = ni;
            }
            if (refine_left < 0) refine_left = kGoalRefineIterations;
        }
        if (best_goal_cost <= 1.05 * direct) break;
    }

    if (best_goal_parent < 0) return std::nullopt;

    // Rewiring may have shifted costs after the connection was recorded;
    // pick the cheapest connectable node near the goal.
    for (size_t i = 1; i < nodes.size(); ++i) {
        const double gd = distance(nodes[i].p, goal);
        if (gd > params.step_size) continue;
        const double total = nodes[i].cost + gd;
        if (total + kTieTol < best_goal_cost && segment_free(nodes[i].p, goal)) {
            best_goal_cost = total;
            best_goal_parent = static_cast<int>(i);
        }
    }

    std::vector<Point2> path;
    for (int i = best_goal_parent; i >= 0; i = nodes[i].parent) path.push_back(nodes[i].p);
    std::reverse(path.begin(), path.end());
    if (squared_distance(path.back(), goal) > 0.0) path.push_back(goal);
    return path;
}

}  // namespace explore
