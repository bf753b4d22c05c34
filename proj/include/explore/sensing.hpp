#pragma once

#include <random>
#include <vector>

#include "explore/robot.hpp"
#include "explore/world.hpp"

namespace explore {

struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Standard deviations of the independent x/y Gaussian endpoint noise,
/// in cell widths. Zero noise reduces the scanner to an exact one.
struct NoiseParams {
    double sigma_xx = 0.1;
    double sigma_yy = 0.1;
};

struct SensorParams {
    double range = 1.5;      ///< nominal range R, cell widths
    int rays_per_rev = 72;   ///< one reading each 360/rays_per_rev degrees
    double angular_resolution() const { return 2.0 * M_PI / rays_per_rev; }
};

struct ScanRay {
    double angle = 0.0;       ///< nominal world-frame angle of the ray
    Point2 endpoint;          ///< noisy reported endpoint
};

struct Scan {
    Point2 origin;
    std::vector<ScanRay> rays;
};

/// Per-cell accumulated ray-pass counts. -1 marks a never-observed cell;
/// accumulation promotes the sentinel to 0 before the first increment and
/// never caps (capping at 72 happens in the belief formula).
class RayCountMap {
public:
    RayCountMap() = default;
    explicit RayCountMap(int cell_count) : counts_(cell_count, -1) {}

    int size() const { return static_cast<int>(counts_.size()); }
    int count(int flat) const { return counts_[flat]; }
    bool observed(int flat) const { return counts_[flat] >= 0; }
    int clamped(int flat) const { return std::max(counts_[flat], 0); }
    void increment(int flat) {
        if (counts_[flat] < 0) counts_[flat] = 0;
        ++counts_[flat];
    }
    int max_clamped() const;

private:
    std::vector<int> counts_;
};

/// Per-cell occupancy beliefs p(C_j) in [0,1]; 1 = no information.
struct BeliefMap {
    std::vector<double> p;
    double at(int flat) const { return p[flat]; }
};

using Rng = std::mt19937_64;

/// One 360-degree reading of the uncertain scanner: rays_per_rev rays at
/// uniform angles starting from the robot heading. Each true endpoint is
/// the first obstacle face within range (pulled back a hair so an exact
/// hit stays in free space), the map border, or the point at distance R;
/// the reported endpoint adds the Gaussian noise and may land beyond
/// walls. Throws SimulationError if the pose is inside an occupied cell.
Scan scan_uncertain(const GridMap& map, const Pose& pose, const SensorParams& sp,
                    const NoiseParams& np, Rng& rng);

/// Increments every traversed cell for every ray of the scan, including
/// the cell the noisy endpoint lands in.
void accumulate(RayCountMap& rc, const GridMap& map, const Scan& scan);

/// Belief update: p = 1 - min(n,72) / (min(max_all,72) + 1e-9), clamped
/// to [0,1]. An all-sentinel map yields p = 1 everywhere.
BeliefMap update_beliefs(const RayCountMap& rc);

/// Ideal disc sensor: cells whose centers are within R and visible.
/// Throws SimulationError when the point is inside an occupied cell.
std::vector<CellIndex> scan_ideal(const GridMap& map, Point2 point, double R);

/// A cell counts as confidently empty once scanned at least
/// `threshold` times (clamped count).
bool is_confident_empty(const RayCountMap& rc, int flat, int threshold = 14);

constexpr int kRayCap = 72;
constexpr double kBeliefEpsilon = 1e-9;

}  // namespace explore
