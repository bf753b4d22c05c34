#include "explore/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace explore {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

struct Binding {
    std::function<void(AppConfig&, const std::string&)> set;
    std::function<std::string(const AppConfig&)> get;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

const std::map<std::string, Binding>& bindings() {
    static const std::map<std::string, Binding> table = [] {
        std::map<std::string, Binding> b;
        auto add_d = [&b](const std::string& key, auto getter) {
            b[key] = Binding{
                [getter](AppConfig& c, const std::string& v) {
                    size_t pos = 0;
                    const double parsed = std::stod(v, &pos);
                    if (pos != v.size()) throw ConfigError("bad number: " + v);
                    *getter(c) = parsed;
                },
                [getter](const AppConfig& c) {
                    return fmt(*getter(const_cast<AppConfig&>(c)));
                }};
        };
        auto add_i = [&b](const std::string& key, auto getter) {
            b[key] = Binding{
                [getter](AppConfig& c, const std::string& v) {
                    size_t pos = 0;
                    const long parsed = std::stol(v, &pos);
                    if (pos != v.size()) throw ConfigError("bad integer: " + v);
                    *getter(c) = static_cast<int>(parsed);
                },
                [getter](const AppConfig& c) {
                    return std::to_string(*getter(const_cast<AppConfig&>(c)));
                }};
        };

        add_d("sensor.range", [](AppConfig& c) { return &c.hipp.sensor.range; });
        add_i("sensor.rays_per_rev", [](AppConfig& c) { return &c.hipp.sensor.rays_per_rev; });
        add_d("noise.sigma_xx", [](AppConfig& c) { return &c.hipp.noise.sigma_xx; });
        add_d("noise.sigma_yy", [](AppConfig& c) { return &c.hipp.noise.sigma_yy; });
        add_d("robot.wheel_radius", [](AppConfig& c) { return &c.hipp.robot.wheel_radius; });
        add_d("robot.track_width", [](AppConfig& c) { return &c.hipp.robot.track_width; });
        add_d("robot.max_speed", [](AppConfig& c) { return &c.hipp.robot.max_speed; });
        add_d("robot.max_yaw_rate", [](AppConfig& c) { return &c.hipp.robot.max_yaw_rate; });
        add_d("gain.beta_distance", [](AppConfig& c) { return &c.hipp.gain.beta_distance; });
        add_d("gain.epsilon_greedy", [](AppConfig& c) { return &c.hipp.gain.epsilon_greedy; });
        add_i("gain.top_k", [](AppConfig& c) { return &c.hipp.gain.top_k; });
        add_d("rrt.step_size", [](AppConfig& c) { return &c.hipp.rrt.step_size; });
        add_d("rrt.goal_bias", [](AppConfig& c) { return &c.hipp.rrt.goal_bias; });
        add_i("rrt.max_iterations", [](AppConfig& c) { return &c.hipp.rrt.max_iterations; });
        add_d("rrt.rewire_radius", [](AppConfig& c) { return &c.hipp.rrt.rewire_radius; });
        add_d("rrt.occupancy_threshold",
              [](AppConfig& c) { return &c.hipp.rrt.occupancy_threshold; });
        add_d("hipp.mission_time", [](AppConfig& c) { return &c.hipp.mission_time; });
        add_d("hipp.sample_time", [](AppConfig& c) { return &c.hipp.sample_time; });
        add_i("hipp.confidence_count", [](AppConfig& c) { return &c.hipp.confidence_count; });
        add_i("freearc.segments_per_circle",
              [](AppConfig& c) { return &c.free_arc.segments_per_circle; });
        add_d("freearc.phi", [](AppConfig& c) { return &c.free_arc.phi; });
        add_d("freearc.step_gain", [](AppConfig& c) { return &c.free_arc.step_gain; });
        add_d("freearc.step_clamp", [](AppConfig& c) { return &c.free_arc.step_clamp; });
        add_d("ocp.alpha", [](AppConfig& c) { return &c.ocp.alpha; });
        add_d("ocp.beta", [](AppConfig& c) { return &c.ocp.beta; });
        add_d("ocp.mu", [](AppConfig& c) { return &c.ocp.mu; });
        add_d("ocp.gamma", [](AppConfig& c) { return &c.ocp.gamma; });
        add_i("posterior.waypoints", [](AppConfig& c) { return &c.posterior_waypoints; });
        add_i("posterior.generations", [](AppConfig& c) { return &c.posterior_generations; });
        return b;
    }();
    return table;
}

}  // namespace

AppConfig AppConfig::parse_text(const std::string& text) {
    AppConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = bindings().find(key);
        if (it == bindings().end())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
        try {
            it->second.set(config, value);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": bad value for '" + key + "'");
        }
    }
    config.hipp.robot.sample_time = config.hipp.sample_time;
    return config;
}

AppConfig AppConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

std::string AppConfig::to_text() const {
    std::ostringstream out;
    for (const auto& [key, binding] : bindings())
        out << key << " = " << binding.get(*this) << "\n";
    return out.str();
}

}  // namespace explore
