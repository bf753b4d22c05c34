#include "explore/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace explore {
namespace {

std::string fmt(double v, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

double rate(double count, double denom) { return denom > 0.0 ? count / denom : 0.0; }

TimeSeries series_from_trace(const RunTrace& trace, double cell_width) {
    TimeSeries s;
    int prev_id = 0;
    double prev_d = 0.0;
    for (const StepRecord& rec : trace.steps) {
        const double dist_m = rec.ttd * cell_width;
        s.step.push_back(rec.k);
        s.cumulative_identified.push_back(rec.identified_cells);
        s.cumulative_distance_m.push_back(dist_m);
        const double dd = dist_m - prev_d;
        const double di = rec.identified_cells - prev_id;
        s.instantaneous_cells_per_m.push_back(dd > 1e-12 ? di / dd : 0.0);
        prev_id = rec.identified_cells;
        prev_d = dist_m;
    }
    return s;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

ScenarioSpec builtin_scenario(int id) {
    ScenarioSpec spec;
    spec.posterior_generations = 100;
    // Waypoint counts sized so the static discs roughly tile the free area
    // of a 20x20 map; the path between them provides the rest.
    spec.posterior_waypoints = 44;
    spec.start_cell = 1;
    switch (id) {
        case 1:
            spec.name = "scenario1";
            spec.map_file = builtin_map_path("scenario1.map");
            break;
        case 2:
            spec.name = "scenario2";
            spec.map_file = builtin_map_path("scenario2.map");
            break;
        case 3:
            spec.name = "scenario3";
            spec.map_file = builtin_map_path("scenario3.map");
            break;
        default:
            throw std::out_of_range("builtin scenarios are 1, 2 and 3");
    }
    return spec;
}

std::string builtin_map_path(const std::string& file_name) {
    return std::string(EXPLORE_MAPS_DIR) + "/" + file_name;
}

Aggregate aggregate(const std::vector<double>& values) {
    Aggregate a;
    if (values.empty()) return a;
    const double n = static_cast<double>(values.size());
    for (double v : values) a.mean += v;
    a.mean /= n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / (n - 1.0));
    }
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const size_t mid = sorted.size() / 2;
    a.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return a;
}

int identified_cells(const RayCountMap& rc, int threshold) {
    int count = 0;
    for (int i = 0; i < rc.size(); ++i)
        if (std::min(rc.clamped(i), kRayCap) >= threshold) ++count;
    return count;
}

int equivalent_identified_cells(const RunTrace& trace, const GridMap& map, double R) {
    std::set<CellIndex> covered;
    const auto add = [&](Point2 p) {
        for (CellIndex j : scan_ideal(map, p, R)) covered.insert(j);
    };
    add(trace.start.position);
    for (const StepRecord& rec : trace.steps) add(rec.pose.position);
    return static_cast<int>(covered.size());
}

std::vector<CellIndex> replay_coverage(const std::vector<Point2>& path,
                                       const GridMap& map, double R) {
    std::set<CellIndex> covered;
    const auto add = [&](Point2 p) {
        for (CellIndex j : scan_ideal(map, p, R)) covered.insert(j);
    };
    if (!path.empty()) add(path.front());
    for (size_t i = 1; i < path.size(); ++i) {
        const double len = distance(path[i - 1], path[i]);
        const int n = std::max(1, static_cast<int>(std::ceil(len)));
        for (int s = 1; s <= n; ++s) {
            const double t = static_cast<double>(s) / n;
            add(path[i - 1] + t * (path[i] - path[i - 1]));
        }
    }
    return {covered.begin(), covered.end()};
}

HippRunOutput run_hipp_once(const GridMap& map, const ScenarioSpec& scenario,
                            const AppConfig& config, uint64_t seed) {
    HippConfig hc = config.hipp;
    hc.seed = seed;
    HippRunOutput out;
    out.trace = run_hipp(map, hc, scenario.start_cell);
    out.series = series_from_trace(out.trace, map.cell_width_m());

    RunSummary& s = out.summary;
    s.seed = seed;
    s.steps = static_cast<int>(out.trace.steps.size());
    const double ttd_w =
        out.trace.steps.empty() ? 0.0 : out.trace.steps.back().ttd;
    s.ttd_m = ttd_w * map.cell_width_m();
    s.identified_cells = identified_cells(out.trace.counts, hc.confidence_count);
    s.cells_per_td_m = rate(s.identified_cells, s.ttd_m);
    s.cells_per_td_w = rate(s.identified_cells, ttd_w);
    const int equiv = equivalent_identified_cells(out.trace, map, hc.sensor.range);
    s.equivalent_cells = equiv;
    s.equivalent_cells_per_td_m = rate(equiv, s.ttd_m);
    s.equivalent_cells_per_td_w = rate(equiv, ttd_w);
    return out;
}

PosteriorRunOutput run_posterior_once(const GridMap& map, const ScenarioSpec& scenario,
                                      const AppConfig& config, uint64_t seed) {
    Rng rng(seed);
    PosteriorRunOutput out;
    out.solution = solve_posterior(map, map.center_of(scenario.start_cell),
                                   scenario.posterior_waypoints,
                                   scenario.posterior_generations,
                                   config.hipp.sensor.range, config.free_arc,
                                   config.hipp.rrt, rng);
    out.covered = replay_coverage(out.solution.path, map, config.hipp.sensor.range);

    // Time series over the densified replay poses.
    std::set<CellIndex> seen;
    const auto& path = out.solution.path;
    int k = 0;
    double dist_w = 0.0;
    int prev_id = 0;
    double prev_d = 0.0;
    const auto record = [&](Point2 p) {
        for (CellIndex j : scan_ideal(map, p, config.hipp.sensor.range)) seen.insert(j);
        const double d_m = dist_w * map.cell_width_m();
        out.series.step.push_back(k++);
        out.series.cumulative_identified.push_back(static_cast<int>(seen.size()));
        out.series.cumulative_distance_m.push_back(d_m);
        const double dd = d_m - prev_d;
        const double di = static_cast<double>(seen.size()) - prev_id;
        out.series.instantaneous_cells_per_m.push_back(dd > 1e-12 ? di / dd : 0.0);
        prev_id = static_cast<int>(seen.size());
        prev_d = d_m;
    };
    if (!path.empty()) record(path.front());
    for (size_t i = 1; i < path.size(); ++i) {
        const double len = distance(path[i - 1], path[i]);
        const int n = std::max(1, static_cast<int>(std::ceil(len)));
        for (int s = 1; s <= n; ++s) {
            dist_w += len / n;
            record(path[i - 1] + (static_cast<double>(s) / n) * (path[i] - path[i - 1]));
        }
    }

    RunSummary& s = out.summary;
    s.seed = seed;
    s.steps = path.empty() ? 0 : static_cast<int>(path.size()) - 1;
    s.ttd_m = out.solution.path_length * map.cell_width_m();
    s.identified_cells = static_cast<int>(out.covered.size());
    s.cells_per_td_m = rate(s.identified_cells, s.ttd_m);
    s.cells_per_td_w = rate(s.identified_cells, out.solution.path_length);
    return out;
}

ExperimentResult run_experiment(const ScenarioSpec& scenario, Algorithm algorithm,
                                int n_runs, uint64_t base_seed, const AppConfig& config) {
    const GridMap map = GridMap::load_file(scenario.map_file);
    ExperimentResult result;
    result.scenario = scenario;
    result.algorithm = algorithm;
    for (int i = 0; i < n_runs; ++i) {
        const uint64_t seed = base_seed + static_cast<uint64_t>(i);
        try {
            if (algorithm == Algorithm::kHipp) {
                result.hipp_runs.push_back(run_hipp_once(map, scenario, config, seed));
                result.summaries.push_back(result.hipp_runs.back().summary);
            } else {
                result.posterior_runs.push_back(
                    run_posterior_once(map, scenario, config, seed));
                result.summaries.push_back(result.posterior_runs.back().summary);
            }
        } catch (const std::exception& e) {
            throw std::runtime_error(scenario.name + " seed " + std::to_string(seed) +
                                     " failed: " + e.what());
        }
    }
    return result;
}

std::string summary_csv(const std::vector<ExperimentResult>& results) {
    std::ostringstream out;
    out << "scenario,algorithm,seed,steps,ttd_m,identified_cells,cells_per_td_m,"
           "cells_per_td_w,equivalent_cells,equivalent_cells_per_td_m,"
           "equivalent_cells_per_td_w\n";
    for (const ExperimentResult& res : results) {
        const std::string algo =
            res.algorithm == Algorithm::kHipp ? "hipp" : "posterior";
        std::vector<double> steps, ttd, ident, cpm, cpw, eq, eqm, eqw;
        for (const RunSummary& s : res.summaries) {
            out << res.scenario.name << ',' << algo << ',' << s.seed << ',' << s.steps
                << ',' << fmt(s.ttd_m) << ',' << s.identified_cells << ','
                << fmt(s.cells_per_td_m) << ',' << fmt(s.cells_per_td_w) << ',';
            if (s.equivalent_cells) {
                out << *s.equivalent_cells << ',' << fmt(*s.equivalent_cells_per_td_m)
                    << ',' << fmt(*s.equivalent_cells_per_td_w);
            } else {
                out << ",,";
            }
            out << '\n';
            steps.push_back(s.steps);
            ttd.push_back(s.ttd_m);
            ident.push_back(s.identified_cells);
            cpm.push_back(s.cells_per_td_m);
            cpw.push_back(s.cells_per_td_w);
            if (s.equivalent_cells) {
                eq.push_back(*s.equivalent_cells);
                eqm.push_back(*s.equivalent_cells_per_td_m);
                eqw.push_back(*s.equivalent_cells_per_td_w);
            }
        }
        const auto row = [&](const std::string& stat, auto pick) {
            out << res.scenario.name << ',' << algo << ',' << stat << ','
                << fmt(pick(aggregate(steps))) << ',' << fmt(pick(aggregate(ttd))) << ','
                << fmt(pick(aggregate(ident))) << ',' << fmt(pick(aggregate(cpm))) << ','
                << fmt(pick(aggregate(cpw))) << ',';
            if (!eq.empty()) {
                out << fmt(pick(aggregate(eq))) << ',' << fmt(pick(aggregate(eqm)))
                    << ',' << fmt(pick(aggregate(eqw)));
            } else {
                out << ",,";
            }
            out << '\n';
        };
        row("mean", [](const Aggregate& a) { return a.mean; });
        row("std", [](const Aggregate& a) { return a.stddev; });
        row("median", [](const Aggregate& a) { return a.median; });
    }
    return out.str();
}

std::string trace_csv(const RunTrace& trace, const GridMap& map, int) {
    std::ostringstream out;
    out << "k,x_m,y_m,theta_rad,ttd_m,identified_cells,confident_cells,rrt_fallback\n";
    const double w = map.cell_width_m();
    for (const StepRecord& rec : trace.steps) {
        out << rec.k << ',' << fmt(rec.pose.position.x * w) << ','
            << fmt(rec.pose.position.y * w) << ',' << fmt(rec.pose.heading) << ','
            << fmt(rec.ttd * w) << ',' << rec.identified_cells << ','
            << rec.confident_cells << ',' << (rec.rrt_fallback ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string timeseries_csv(const TimeSeries& series) {
    std::ostringstream out;
    out << "k,cum_identified_cells,cum_distance_m,inst_cells_per_m\n";
    for (size_t i = 0; i < series.step.size(); ++i) {
        out << series.step[i] << ',' << series.cumulative_identified[i] << ','
            << fmt(series.cumulative_distance_m[i]) << ','
            << fmt(series.instantaneous_cells_per_m[i]) << '\n';
    }
    return out.str();
}

std::string solution_csv(const PosteriorSolution& sol, const GridMap& map) {
    std::ostringstream out;
    const double w = map.cell_width_m();
    out << "type,x_m,y_m\n";
    for (const Point2& p : sol.waypoints.positions)
        out << "waypoint," << fmt(p.x * w) << ',' << fmt(p.y * w) << '\n';
    for (const Point2& p : sol.path)
        out << "path," << fmt(p.x * w) << ',' << fmt(p.y * w) << '\n';
    return out.str();
}

std::string map_svg(const GridMap& map, const std::vector<Point2>& path_w,
                    const std::vector<Point2>& waypoints_w,
                    const std::vector<CellIndex>& highlight_cells) {
    const double w = map.cell_width_m();
    const double width_m = map.width() * w;
    const double height_m = map.height() * w;
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt(width_m, 3)
        << ' ' << fmt(height_m, 3) << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << fmt(width_m, 3) << "\" height=\""
        << fmt(height_m, 3) << "\" fill=\"white\" stroke=\"black\" stroke-width=\""
        << fmt(0.02 * w, 4) << "\"/>\n";

    const auto cell_rect = [&](Cell c, const char* fill, const char* extra) {
        out << "<rect x=\"" << fmt(c.col * w, 4) << "\" y=\""
            << fmt((map.height() - 1 - c.row) * w, 4) << "\" width=\"" << fmt(w, 4)
            << "\" height=\"" << fmt(w, 4) << "\" fill=\"" << fill << "\"" << extra
            << "/>\n";
    };
    for (CellIndex j : highlight_cells)
        cell_rect(map.cell_of(j), "#ff8080", " fill-opacity=\"0.6\"");
    for (int row = 0; row < map.height(); ++row)
        for (int col = 0; col < map.width(); ++col)
            if (map.occupied(Cell{row, col})) cell_rect({row, col}, "#303030", "");

    for (int i = 1; i < map.width(); ++i)
        out << "<line x1=\"" << fmt(i * w, 4) << "\" y1=\"0\" x2=\"" << fmt(i * w, 4)
            << "\" y2=\"" << fmt(height_m, 3)
            << "\" stroke=\"#d0d0d0\" stroke-width=\"" << fmt(0.01 * w, 4) << "\"/>\n";
    for (int i = 1; i < map.height(); ++i)
        out << "<line x1=\"0\" y1=\"" << fmt(i * w, 4) << "\" x2=\"" << fmt(width_m, 3)
            << "\" y2=\"" << fmt(i * w, 4)
            << "\" stroke=\"#d0d0d0\" stroke-width=\"" << fmt(0.01 * w, 4) << "\"/>\n";

    if (!path_w.empty()) {
        out << "<polyline fill=\"none\" stroke=\"#c00000\" stroke-width=\""
            << fmt(0.08 * w, 4) << "\" points=\"";
        for (size_t i = 0; i < path_w.size(); ++i) {
            if (i) out << ' ';
            out << fmt(path_w[i].x, 4) << ',' << fmt(height_m - path_w[i].y, 4);
        }
        out << "\"/>\n";
    }
    for (const Point2& p : waypoints_w)
        out << "<circle cx=\"" << fmt(p.x, 4) << "\" cy=\"" << fmt(height_m - p.y, 4)
            << "\" r=\"" << fmt(0.15 * w, 4) << "\" fill=\"#2040c0\"/>\n";
    out << "</svg>\n";
    return out.str();
}

void emit_outputs(const std::vector<ExperimentResult>& results,
                  const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir +
                                     ": " + ec.message());

    write_file(out_dir + "/summary.csv", summary_csv(results));

    for (const ExperimentResult& res : results) {
        const GridMap map = GridMap::load_file(res.scenario.map_file);
        const double w = map.cell_width_m();
        for (const HippRunOutput& run : res.hipp_runs) {
            const std::string stem = out_dir + "/" + res.scenario.name + "_hipp_s" +
                                     std::to_string(run.summary.seed);
            write_file(stem + "_trace.csv", trace_csv(run.trace, map, 0));
            write_file(stem + "_timeseries.csv", timeseries_csv(run.series));

            std::vector<Point2> path_m{ {run.trace.start.position.x * w,
                                         run.trace.start.position.y * w} };
            for (const StepRecord& rec : run.trace.steps)
                path_m.push_back({rec.pose.position.x * w, rec.pose.position.y * w});
            std::vector<CellIndex> unconfident;
            for (int i = 0; i < map.cell_count(); ++i) {
                const Cell c{i / map.width(), i % map.width()};
                if (!map.occupied(c) &&
                    !is_confident_empty(run.trace.counts, i, 14))
                    unconfident.push_back(map.index_of(c));
            }
            std::sort(unconfident.begin(), unconfident.end());
            write_file(stem + "_map.svg", map_svg(map, path_m, {}, unconfident));
        }
        for (const PosteriorRunOutput& run : res.posterior_runs) {
            const std::string stem = out_dir + "/" + res.scenario.name + "_posterior_s" +
                                     std::to_string(run.summary.seed);
            write_file(stem + "_solution.csv", solution_csv(run.solution, map));
            write_file(stem + "_timeseries.csv", timeseries_csv(run.series));
            std::vector<Point2> path_m;
            for (const Point2& p : run.solution.path)
                path_m.push_back({p.x * w, p.y * w});
            std::vector<Point2> wps_m;
            for (const Point2& p : run.solution.waypoints.positions)
                wps_m.push_back({p.x * w, p.y * w});
            write_file(stem + "_map.svg", map_svg(map, path_m, wps_m, {}));
        }
    }
}

void render_csv(const std::string& csv_path, const GridMap& map,
                const std::string& svg_path) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open " + csv_path);
    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error("empty CSV: " + csv_path);

    std::vector<Point2> path_m;
    std::vector<Point2> waypoints_m;
    std::string line;
    if (header.rfind("k,x_m,y_m", 0) == 0) {
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::string k, x, y;
            std::getline(ls, k, ',');
            std::getline(ls, x, ',');
            std::getline(ls, y, ',');
            path_m.push_back({std::stod(x), std::stod(y)});
        }
    } else if (header.rfind("type,x_m,y_m", 0) == 0) {
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::string type, x, y;
            std::getline(ls, type, ',');
            std::getline(ls, x, ',');
            std::getline(ls, y, ',');
            if (type == "waypoint") waypoints_m.push_back({std::stod(x), std::stod(y)});
            else path_m.push_back({std::stod(x), std::stod(y)});
        }
    } else {
        throw std::runtime_error("unrecognized CSV header in " + csv_path);
    }
    write_file(svg_path, map_svg(map, path_m, waypoints_m, {}));
}

}  // namespace explore
