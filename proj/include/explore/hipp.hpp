#pragma once

#include <cstdint>
#include <vector>

#include "explore/gain.hpp"
#include "explore/plan.hpp"
#include "explore/robot.hpp"
#include "explore/sensing.hpp"
#include "explore/world.hpp"

namespace explore {

/// Thrown when the simulated robot touches an occupied ground-truth cell;
/// a collision fails the whole run.
struct CollisionError : SimulationError {
    using SimulationError::SimulationError;
};

struct HippConfig {
    SensorParams sensor;
    NoiseParams noise;
    RobotParams robot;
    GainParams gain;
    RrtParams rrt;
    double mission_time = 200.0;  ///< T_f, seconds
    double sample_time = 1.0;     ///< T_s, seconds
    int confidence_count = 14;    ///< scans needed to call a cell empty
    uint64_t seed = 1;

    int max_steps() const { return static_cast<int>(mission_time / sample_time); }
};

struct StepRecord {
    int k = 0;
    Pose pose;  ///< after the move
    WheelSpeeds wheels;
    std::vector<CellIndex> selected;
    Point2 destination;
    bool rrt_fallback = false;
    double ttd = 0.0;  ///< cumulative, cell widths
    int identified_cells = 0;
    int confident_cells = 0;  ///< confident among reachable free cells
};

struct RunTrace {
    Pose start;
    std::vector<StepRecord> steps;
    RayCountMap counts;
    BeliefMap beliefs;
    bool mapping_complete = false;  ///< ended before the time budget
};

/// True iff some observed cell strictly between a and b (endpoint cells
/// excluded) has belief at or above the threshold.
bool is_obstacle_between(const BeliefMap& beliefs, const RayCountMap& rc,
                         const GridMap& map, Point2 a, Point2 b, double threshold);

/// Mutable state threaded through hipp_step.
struct HippState {
    Pose pose;
    RayCountMap counts;
    BeliefMap beliefs;
    Rng rng;
    int k = 0;
    double ttd = 0.0;
    bool finished = false;
    bool mapping_complete = false;
    std::vector<uint8_t> reachable;  ///< ground-truth flood fill from start
    std::vector<uint8_t> blacklist;  ///< destinations that produced no motion
    std::vector<uint8_t> stuck_counts;
};

HippState init_hipp(const GridMap& map, const HippConfig& config, Pose start);

/// One loop body: scan, accumulate, update beliefs, gain field, epsilon-
/// greedy selection, closed tour, obstacle check with RRT* fallback, then
/// one sampling-time move. Appends the step record to `trace`.
void hipp_step(HippState& state, const GridMap& map, const HippConfig& config,
               RunTrace& trace);

/// Runs Algorithm-style exploration from the given start cell until the
/// time budget runs out, every reachable free cell is confidently empty,
/// or no candidate cell remains. Deterministic for a fixed seed.
RunTrace run_hipp(const GridMap& map, const HippConfig& config, CellIndex start_cell);

}  // namespace explore
