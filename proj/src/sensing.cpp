#include "explore/sensing.hpp"

#include <algorithm>
#include <cmath>

namespace explore {
namespace {

// Pullback applied to exact obstacle hits so a noiseless endpoint stays
// strictly inside the last free cell.
constexpr double kHitPullback = 1e-9;

// Parameter along origin->dir (unit) at which the ray first enters an
// occupied cell, or +inf if it stays in free space until t_max.
double first_obstacle_entry(const GridMap& map, Point2 origin, Point2 end) {
    const auto cells = map.traverse_ray(origin, end);
    const double dx = end.x - origin.x;
    const double dy = end.y - origin.y;
    for (const Cell& c : cells) {
        if (!map.occupied(c)) continue;
        // Entry parameter into this cell: the smallest t at which the
        // segment reaches the cell's slab on each axis.
        double t = 0.0;
        if (dx > 0.0) t = std::max(t, (c.col - origin.x) / dx);
        else if (dx < 0.0) t = std::max(t, (c.col + 1 - origin.x) / dx);
        if (dy > 0.0) t = std::max(t, (c.row - origin.y) / dy);
        else if (dy < 0.0) t = std::max(t, (c.row + 1 - origin.y) / dy);
        return t;
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace

int RayCountMap::max_clamped() const {
    int m = 0;
    for (int c : counts_) m = std::max(m, c);
    return m;
}

Scan scan_uncertain(const GridMap& map, const Pose& pose, const SensorParams& sp,
                    const NoiseParams& np, Rng& rng) {
    if (!map.contains(pose.position))
        throw SimulationError("scan pose outside the map");
    if (map.occupied(map.cell_at(pose.position)))
        throw SimulationError("scan pose inside an occupied cell");

    std::normal_distribution<double> nx(0.0, np.sigma_xx);
    std::normal_distribution<double> ny(0.0, np.sigma_yy);

    Scan scan;
    scan.origin = pose.position;
    scan.rays.reserve(sp.rays_per_rev);
    for (int i = 0; i < sp.rays_per_rev; ++i) {
        const double angle = normalize_angle(pose.heading + i * sp.angular_resolution());
        const Point2 dir{std::cos(angle), std::sin(angle)};
        const Point2 nominal_end = pose.position + sp.range * dir;

        double t_hit = 1.0;  // fraction of the nominal range
        const double entry = first_obstacle_entry(map, pose.position, nominal_end);
        if (entry < 1.0) t_hit = std::max(0.0, entry - kHitPullback / sp.range);

        Point2 true_end = pose.position + (t_hit * sp.range) * dir;
        ScanRay ray;
        ray.angle = angle;
        const double gx = np.sigma_xx > 0.0 ? nx(rng) : 0.0;
        const double gy = np.sigma_yy > 0.0 ? ny(rng) : 0.0;
        ray.endpoint = {true_end.x + gx, true_end.y + gy};
        scan.rays.push_back(ray);
    }
    return scan;
}

void accumulate(RayCountMap& rc, const GridMap& map, const Scan& scan) {
    for (const ScanRay& ray : scan.rays) {
        for (const Cell& c : map.traverse_ray(scan.origin, ray.endpoint))
            rc.increment(c.row * map.width() + c.col);
    }
}

BeliefMap update_beliefs(const RayCountMap& rc) {
    const double denom = std::min(rc.max_clamped(), kRayCap) + kBeliefEpsilon;
    BeliefMap beliefs;
    beliefs.p.resize(rc.size());
    for (int i = 0; i < rc.size(); ++i) {
        const double n = std::min(rc.clamped(i), kRayCap);
        beliefs.p[i] = std::clamp(1.0 - n / denom, 0.0, 1.0);
    }
    return beliefs;
}

std::vector<CellIndex> scan_ideal(const GridMap& map, Point2 point, double R) {
    if (!map.contains(point))
        throw SimulationError("ideal scan point outside the map");
    if (map.occupied(map.cell_at(point)))
        throw SimulationError("ideal scan point inside an occupied cell");
    return map.disc_cells(point, R);
}

bool is_confident_empty(const RayCountMap& rc, int flat, int threshold) {
    return std::min(rc.clamped(flat), kRayCap) >= threshold;
}

}  // namespace explore
