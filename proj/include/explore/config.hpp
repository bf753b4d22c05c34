#pragma once

#include <string>

#include "explore/benchmark.hpp"
#include "explore/hipp.hpp"

namespace explore {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Every tunable of the toolkit with its default. Lengths are in cell
/// widths, times in seconds. Loaded from flat key=value text; unknown keys
/// are rejected.
struct AppConfig {
    HippConfig hipp;
    FreeArcParams free_arc;
    OcpWeights ocp;
    int posterior_waypoints = 12;
    int posterior_generations = 100;

    /// Parses `key = value` lines ('#' starts a comment). Throws
    /// ConfigError naming the offending line.
    static AppConfig load_file(const std::string& path);
    static AppConfig parse_text(const std::string& text);

    /// All keys and current values in load_file format, one per line.
    std::string to_text() const;
};

}  // namespace explore
