#pragma once

#include <optional>
#include <string>
#include <vector>

#include "explore/benchmark.hpp"
#include "explore/config.hpp"
#include "explore/hipp.hpp"

namespace explore {

struct ScenarioSpec {
    std::string name;
    std::string map_file;
    CellIndex start_cell = 1;       ///< bottom-left free cell for built-ins
    int posterior_waypoints = 12;
    int posterior_generations = 100;
};

/// Built-in test scenarios 1-3 (20x20 maps; scenario 2 has 355 free
/// cells, scenario 3 has 346). Throws std::out_of_range otherwise.
ScenarioSpec builtin_scenario(int id);

/// Resolves a built-in map name under the shipped maps directory.
std::string builtin_map_path(const std::string& file_name);

enum class Algorithm { kHipp, kPosterior };

struct RunSummary {
    uint64_t seed = 0;
    int steps = 0;
    double ttd_m = 0.0;
    int identified_cells = 0;
    double cells_per_td_m = 0.0;
    double cells_per_td_w = 0.0;
    std::optional<int> equivalent_cells;
    std::optional<double> equivalent_cells_per_td_m;
    std::optional<double> equivalent_cells_per_td_w;
};

struct TimeSeries {
    std::vector<int> step;
    std::vector<int> cumulative_identified;
    std::vector<double> cumulative_distance_m;
    std::vector<double> instantaneous_cells_per_m;
};

struct HippRunOutput {
    RunSummary summary;
    RunTrace trace;
    TimeSeries series;
};

struct PosteriorRunOutput {
    RunSummary summary;
    PosteriorSolution solution;
    TimeSeries series;
    std::vector<CellIndex> covered;  ///< replayed ideal coverage
};

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;  ///< sample standard deviation
    double median = 0.0;
};

Aggregate aggregate(const std::vector<double>& values);

struct ExperimentResult {
    ScenarioSpec scenario;
    Algorithm algorithm = Algorithm::kHipp;
    std::vector<HippRunOutput> hipp_runs;
    std::vector<PosteriorRunOutput> posterior_runs;
    std::vector<RunSummary> summaries;
};

/// Cells scanned at least `threshold` times.
int identified_cells(const RayCountMap& rc, int threshold);

/// Cells an ideal disc sensor of range R would identify from the start
/// pose and every per-step pose of the trace.
int equivalent_identified_cells(const RunTrace& trace, const GridMap& map, double R);

/// Ideal-sensor replay along a polyline with intermediate poses densified
/// to at most one cell width apart; returns the covered cell set.
std::vector<CellIndex> replay_coverage(const std::vector<Point2>& path,
                                       const GridMap& map, double R);

HippRunOutput run_hipp_once(const GridMap& map, const ScenarioSpec& scenario,
                            const AppConfig& config, uint64_t seed);
PosteriorRunOutput run_posterior_once(const GridMap& map, const ScenarioSpec& scenario,
                                      const AppConfig& config, uint64_t seed);

/// Runs seeds base_seed .. base_seed+n_runs-1. A failing run aborts with
/// the failing seed in the error message.
ExperimentResult run_experiment(const ScenarioSpec& scenario, Algorithm algorithm,
                                int n_runs, uint64_t base_seed, const AppConfig& config);

/// Writes summary.csv plus per-run trace/timeseries/solution CSVs and a
/// map SVG into out_dir. Files are byte-stable for a fixed seed.
void emit_outputs(const std::vector<ExperimentResult>& results,
                  const std::string& out_dir);

/// Renders a trace or solution CSV over its map as an SVG.
void render_csv(const std::string& csv_path, const GridMap& map,
                const std::string& svg_path);

std::string summary_csv(const std::vector<ExperimentResult>& results);
std::string trace_csv(const RunTrace& trace, const GridMap& map, int confidence_count);
std::string timeseries_csv(const TimeSeries& series);
std::string solution_csv(const PosteriorSolution& sol, const GridMap& map);
std::string map_svg(const GridMap& map, const std::vector<Point2>& path_w,
                    const std::vector<Point2>& waypoints_w,
                    const std::vector<CellIndex>& highlight_cells);

}  // namespace explore
