#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "explore/harness.hpp"

namespace {

using namespace explore;

AppConfig load_config(const std::string& path) {
    if (path.empty()) return AppConfig{};
    return AppConfig::load_file(path);
}

ScenarioSpec scenario_for_map(const std::string& map_file, const AppConfig& config) {
    ScenarioSpec spec;
    spec.name = std::filesystem::path(map_file).stem().string();
    spec.map_file = map_file;
    spec.start_cell = 1;
    spec.posterior_waypoints = config.posterior_waypoints;
    spec.posterior_generations = config.posterior_generations;
    return spec;
}

CellIndex first_free_cell(const GridMap& map) {
    for (CellIndex j = 1; j <= map.cell_count(); ++j)
        if (!map.occupied(j)) return j;
    throw SimulationError("map has no free cell");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid-world exploration toolkit: heuristic informative path "
                 "planner and posterior remapping benchmark"};
    app.require_subcommand(1);

    std::string map_file, out_dir, config_file, trace_file, svg_file;
    uint64_t seed = 1;
    int n_wp = -1, n_gen = -1, scenario_id = 1, runs = 10;
    uint64_t base_seed = 1;

    CLI::App* hipp = app.add_subcommand("hipp", "run one exploration of an unknown map");
    hipp->add_option("--map", map_file, "map file")->required();
    hipp->add_option("--seed", seed, "random seed");
    hipp->add_option("--out", out_dir, "output directory")->required();
    hipp->add_option("--config", config_file, "key=value config file");

    CLI::App* post = app.add_subcommand("posterior", "solve the remapping benchmark on a known map");
    post->add_option("--map", map_file, "map file")->required();
    post->add_option("--seed", seed, "random seed");
    post->add_option("--waypoints", n_wp, "number of coverage waypoints");
    post->add_option("--generations", n_gen, "free-arc generations");
    post->add_option("--out", out_dir, "output directory")->required();
    post->add_option("--config", config_file, "key=value config file");

    CLI::App* cmp = app.add_subcommand("compare", "run both algorithms over seeded repeats");
    cmp->add_option("--scenario", scenario_id, "built-in scenario id (1-3)")
        ->check(CLI::Range(1, 3));
    cmp->add_option("--runs", runs, "repeats per algorithm");
    cmp->add_option("--base-seed", base_seed, "first seed");
    cmp->add_option("--out", out_dir, "output directory")->required();
    cmp->add_option("--config", config_file, "key=value config file");

    CLI::App* render = app.add_subcommand("render", "render a trace or solution CSV to SVG");
    render->add_option("trace", trace_file, "trace/solution CSV")->required();
    render->add_option("--map", map_file, "map file")->required();
    render->add_option("-o,--output", svg_file, "output SVG")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const AppConfig config = load_config(config_file);
        if (app.got_subcommand(hipp)) {
            const GridMap map = GridMap::load_file(map_file);
            ScenarioSpec spec = scenario_for_map(map_file, config);
            spec.start_cell = first_free_cell(map);
            ExperimentResult result = run_experiment(spec, Algorithm::kHipp, 1, seed, config);
            emit_outputs({result}, out_dir);
            std::cout << "wrote " << out_dir << "/summary.csv ("
                      << result.summaries.front().identified_cells
                      << " cells identified)\n";
        } else if (app.got_subcommand(post)) {
            const GridMap map = GridMap::load_file(map_file);
            ScenarioSpec spec = scenario_for_map(map_file, config);
            spec.start_cell = first_free_cell(map);
            if (n_wp > 0) spec.posterior_waypoints = n_wp;
            if (n_gen > 0) spec.posterior_generations = n_gen;
            ExperimentResult result =
                run_experiment(spec, Algorithm::kPosterior, 1, seed, config);
            emit_outputs({result}, out_dir);
            std::cout << "wrote " << out_dir << "/summary.csv ("
                      << result.summaries.front().identified_cells
                      << " cells covered)\n";
        } else if (app.got_subcommand(cmp)) {
            const ScenarioSpec spec = builtin_scenario(scenario_id);
            std::vector<ExperimentResult> results;
            results.push_back(run_experiment(spec, Algorithm::kHipp, runs, base_seed, config));
            results.push_back(
                run_experiment(spec, Algorithm::kPosterior, runs, base_seed, config));
            emit_outputs(results, out_dir);
            std::cout << "wrote " << out_dir << "/summary.csv\n";
        } else if (app.got_subcommand(render)) {
            const GridMap map = GridMap::load_file(map_file);
            render_csv(trace_file, map, svg_file);
            std::cout << "wrote " << svg_file << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
