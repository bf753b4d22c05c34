#pragma once

#include <vector>

#include "explore/sensing.hpp"
#include "explore/world.hpp"

namespace explore {

struct GainParams {
    double beta_distance = 0.05;   ///< distance penalty per cell width
    double epsilon_greedy = 0.1;
    int top_k = 5;
};

/// Final per-cell information gain I_f, row-major like the map.
struct GainField {
    std::vector<double> value;
    double at(int flat) const { return value[flat]; }
};

/// Shannon entropy of a binary cell belief, log base 2, with 0*log0 = 0.
/// Throws std::domain_error outside [0,1].
double cell_entropy(double p);

/// Per-cell gain: entropy minus beta times the distance to the robot,
/// then smoothed with the 3x3 all-ones kernel under zero padding.
GainField gain_field(const BeliefMap& beliefs, Point2 robot,
                     const GainParams& gp, const GridMap& map);

/// Epsilon-greedy pick of up to top_k candidate cells: each slot takes the
/// next-highest-gain unchosen candidate with probability 1-eps, otherwise a
/// uniformly random unchosen one. Gain ties break toward the lower cell
/// index. An empty candidate list yields an empty result (exploration
/// complete).
std::vector<CellIndex> select_cells(const GainField& field, const GridMap& map,
                                    const GainParams& gp, Rng& rng,
                                    const std::vector<CellIndex>& candidates);

}  // namespace explore
