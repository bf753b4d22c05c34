#include "explore/hipp.hpp"

#include <algorithm>
#include <cmath>

namespace explore {
namespace {

constexpr double kContactMargin = 1e-6;  // cell widths, stop short of a face

// Believed traversability grid for RRT* and the executed-motion gate.
// Observed cells block at p >= threshold; never-observed cells block
// unless they touch an observed free cell (frontier cells stay open so
// fresh space remains reachable).
std::vector<uint8_t> blocked_grid(const GridMap& map, const RayCountMap& rc,
                                  const BeliefMap& beliefs, double threshold) {
    const int w = map.width(), h = map.height();
    std::vector<uint8_t> blocked(static_cast<size_t>(w) * h, 0);
    std::vector<uint8_t> observed_free(static_cast<size_t>(w) * h, 0);
    for (int i = 0; i < w * h; ++i)
        observed_free[i] = rc.observed(i) && beliefs.at(i) < threshold;
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            const int flat = row * w + col;
            if (rc.observed(flat)) {
                blocked[flat] = beliefs.at(flat) >= threshold;
                continue;
            }
            bool frontier = false;
            for (int dr = -1; dr <= 1 && !frontier; ++dr)
                for (int dc = -1; dc <= 1 && !frontier; ++dc) {
                    const int r = row + dr, c = col + dc;
                    if (r < 0 || r >= h || c < 0 || c >= w) continue;
                    frontier = observed_free[r * w + c];
                }
            blocked[flat] = !frontier;
        }
    }
    return blocked;
}

// Entry parameter of `cell` along a->b (slab intersection).
double entry_parameter(Point2 a, Point2 b, Cell cell) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    double t = 0.0;
    if (dx > 0.0) t = std::max(t, (cell.col - a.x) / dx);
    else if (dx < 0.0) t = std::max(t, (cell.col + 1 - a.x) / dx);
    if (dy > 0.0) t = std::max(t, (cell.row - a.y) / dy);
    else if (dy < 0.0) t = std::max(t, (cell.row + 1 - a.y) / dy);
    return t;
}

// Destination candidates: observed cells whose belief is still inside
// (0,1) and that are not yet confidently empty, plus never-observed cells
// adjacent to an observed one (the frontier). Confident cells add nothing
// to the mission and deep-unknown cells are unreachable, so neither is
// offered. The robot's own cell (no move) and cells it already failed to
// reach are dropped too.
std::vector<CellIndex> candidate_cells(const GridMap& map, const RayCountMap& rc,
                                       const BeliefMap& beliefs,
                                       const std::vector<uint8_t>& blacklist,
                                       Cell own, int confidence_count,
                                       double threshold) {
    const int w = map.width(), h = map.height();
    std::vector<CellIndex> out;
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            const int flat = row * w + col;
            if (blacklist[flat]) continue;
            if (Cell{row, col} == own) continue;
            if (rc.observed(flat)) {
                if (beliefs.at(flat) > 0.0 && beliefs.at(flat) < 1.0 &&
                    !is_confident_empty(rc, flat, confidence_count))
                    out.push_back(map.index_of(Cell{row, col}));
                continue;
            }
            bool frontier = false;
            for (int dr = -1; dr <= 1 && !frontier; ++dr)
                for (int dc = -1; dc <= 1 && !frontier; ++dc) {
                    const int r = row + dr, c = col + dc;
                    if (r < 0 || r >= h || c < 0 || c >= w) continue;
                    const int nf = r * w + c;
                    frontier = rc.observed(nf) && beliefs.at(nf) < threshold;
                }
            if (frontier) out.push_back(map.index_of(Cell{row, col}));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

bool is_obstacle_between(const BeliefMap& beliefs, const RayCountMap& rc,
                         const GridMap& map, Point2 a, Point2 b, double threshold) {
    const Cell ca = map.cell_at(a);
    const Cell cb = map.cell_at(b);
    for (const Cell& c : map.traverse_ray(a, b)) {
        if (c == ca || c == cb) continue;
        const int flat = c.row * map.width() + c.col;
        if (rc.observed(flat) && beliefs.at(flat) >= threshold) return true;
    }
    return false;
}

HippState init_hipp(const GridMap& map, const HippConfig& config, Pose start) {
    if (!map.contains(start.position) || map.occupied(map.cell_at(start.position)))
        throw SimulationError("start pose is not in a free cell");
    HippState state;
    state.pose = start;
    state.counts = RayCountMap(map.cell_count());
    state.beliefs = update_beliefs(state.counts);
    state.rng.seed(config.seed);
    state.reachable = map.reachable_free(map.cell_at(start.position));
    state.blacklist.assign(static_cast<size_t>(map.cell_count()), 0);
    state.stuck_counts.assign(static_cast<size_t>(map.cell_count()), 0);
    return state;
}

void hipp_step(HippState& state, const GridMap& map, const HippConfig& config,
               RunTrace& trace) {
    const int w = map.width();
    const double th = config.rrt.occupancy_threshold;

    const Scan scan = scan_uncertain(map, state.pose, config.sensor, config.noise, state.rng);
    accumulate(state.counts, map, scan);
    state.beliefs = update_beliefs(state.counts);
    ++state.k;

    StepRecord rec;
    rec.k = state.k;
    rec.rrt_fallback = false;

    const auto candidates =
        candidate_cells(map, state.counts, state.beliefs, state.blacklist,
                        map.cell_at(state.pose.position), config.confidence_count, th);
    Point2 dest = state.pose.position;
    Cell planned = map.cell_at(state.pose.position);
    if (candidates.empty()) {
        state.finished = true;
        state.mapping_complete = true;
    } else {
        const GainField field = gain_field(state.beliefs, state.pose.position,
                                           config.gain, map);
        rec.selected = select_cells(field, map, config.gain, state.rng, candidates);

        std::vector<Point2> targets;
        targets.reserve(rec.selected.size());
        for (CellIndex j : rec.selected) targets.push_back(map.center_of(j));
        const Tour tour = closed_tour(state.pose.position, targets);
        dest = targets[tour.order.front()];
        planned = map.cell_at(dest);

        if (is_obstacle_between(state.beliefs, state.counts, map,
                                state.pose.position, dest, th)) {
            rec.rrt_fallback = true;
            const auto blocked = blocked_grid(map, state.counts, state.beliefs, th);
            const ObstaclePredicate pred = [&](Point2 p) {
                if (!map.contains(p)) return true;
                const Cell c = map.cell_at(p);
                return blocked[c.row * w + c.col] != 0;
            };
            // Destinations are allowed to be cells still believed occupied
            // (the robot parks at their face); the avoidance query instead
            // targets the last traversable cell on the approach.
            Point2 goal = dest;
            if (pred(goal)) {
                const Cell own = map.cell_at(state.pose.position);
                Cell last = own;
                for (const Cell& c : map.traverse_ray(state.pose.position, dest)) {
                    if (!(c == own) && blocked[c.row * w + c.col]) break;
                    last = c;
                }
                goal = map.center_of(last);
            }
            const auto path = rrt_star(state.pose.position, goal, pred, {0.0, 0.0},
                                       {static_cast<double>(map.width()),
                                        static_cast<double>(map.height())},
                                       config.rrt, state.rng);
            if (path && path->size() >= 2) {
                dest = (*path)[1];
            } else {
                // No route: keep the current heading for one step.
                const double reach = config.robot.max_speed * config.robot.sample_time;
                Point2 ahead{state.pose.position.x + reach * std::cos(state.pose.heading),
                             state.pose.position.y + reach * std::sin(state.pose.heading)};
                ahead.x = std::clamp(ahead.x, 0.0, static_cast<double>(map.width()));
                ahead.y = std::clamp(ahead.y, 0.0, static_cast<double>(map.height()));
                dest = ahead;
            }
        }
    }
    rec.destination = dest;

    StepResult step = step_toward(state.pose, dest, config.robot);

    // Executed translation stops at the face of cells the robot must not
    // enter: deep-unknown cells off the frontier of observed space, and
    // occupied ground-truth cells (physical contact; the planner itself
    // never sees ground truth).
    const Point2 from = state.pose.position;
    if (squared_distance(from, step.pose.position) > 0.0) {
        const auto blocked = blocked_grid(map, state.counts, state.beliefs, th);
        const Cell start_cell = map.cell_at(from);
        double t_stop = 1.0;
        for (const Cell& c : map.traverse_ray(from, step.pose.position)) {
            if (c == start_cell) continue;
            const int flat = c.row * w + c.col;
            const bool deep_unknown = !state.counts.observed(flat) && blocked[flat];
            if (deep_unknown || map.occupied(c)) {
                t_stop = entry_parameter(from, step.pose.position, c);
                break;
            }
        }
        if (t_stop < 1.0) {
            const double len = distance(from, step.pose.position);
            const double travel = std::max(0.0, t_stop * len - kContactMargin);
            step.pose.position = from + (len > 0.0 ? travel / len : 0.0) *
                                            (step.pose.position - from);
            const double yaw = normalize_angle(step.pose.heading - state.pose.heading) /
                               config.robot.sample_time;
            step.wheels = body_to_wheels(travel / config.robot.sample_time, yaw,
                                         config.robot.track_width);
        }
    }

    // Simulation invariant: the executed segment must be collision-free in
    // ground truth.
    for (const Cell& c : map.traverse_ray(from, step.pose.position)) {
        if (map.occupied(c))
            throw CollisionError("robot crossed an occupied cell at step " +
                                 std::to_string(state.k));
    }
    if (map.occupied(map.cell_at(step.pose.position)))
        throw CollisionError("robot ended inside an occupied cell at step " +
                             std::to_string(state.k));

    const double moved = distance(from, step.pose.position);
    state.ttd += moved;

    // A planned target that keeps producing no motion is unreachable (the
    // robot is pressed against something, or avoidance cannot route to
    // it); drop it from future candidate sets. An avoidance step that
    // leaves the robot in place counts straight away.
    const int planned_flat = planned.row * w + planned.col;
    if (!(planned == map.cell_at(from)) && moved < 1e-3) {
        const int add = rec.rrt_fallback && distance(from, dest) < 0.25 ? 2 : 1;
        state.stuck_counts[planned_flat] =
            static_cast<uint8_t>(std::min(4, state.stuck_counts[planned_flat] + add));
        if (state.stuck_counts[planned_flat] >= 2) state.blacklist[planned_flat] = 1;
    }

    state.pose = step.pose;

    rec.pose = state.pose;
    rec.wheels = step.wheels;
    rec.ttd = state.ttd;

    int identified = 0;
    int confident = 0;
    int unconfident_reachable = 0;
    for (int i = 0; i < map.cell_count(); ++i) {
        const bool conf = is_confident_empty(state.counts, i, config.confidence_count);
        if (conf) ++identified;
        if (state.reachable[i]) {
            if (conf) ++confident;
            else ++unconfident_reachable;
        }
    }
    rec.identified_cells = identified;
    rec.confident_cells = confident;
    trace.steps.push_back(rec);

    if (unconfident_reachable == 0) {
        state.finished = true;
        state.mapping_complete = true;
    }
    if (state.k >= config.max_steps()) state.finished = true;
}

RunTrace run_hipp(const GridMap& map, const HippConfig& config, CellIndex start_cell) {
    if (map.occupied(start_cell))
        throw SimulationError("start cell is occupied");
    Pose start;
    start.position = map.center_of(start_cell);
    start.heading = 0.0;

    HippState state = init_hipp(map, config, start);
    RunTrace trace;
    trace.start = start;
    while (!state.finished) hipp_step(state, map, config, trace);
    trace.counts = state.counts;
    trace.beliefs = state.beliefs;
    trace.mapping_complete = state.mapping_complete;
    return trace;
}

}  // namespace explore
