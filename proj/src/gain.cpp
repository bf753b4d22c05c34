#include "explore/gain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace explore {

double cell_entropy(double p) {
    if (p < 0.0 || p > 1.0) throw std::domain_error("belief outside [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

GainField gain_field(const BeliefMap& beliefs, Point2 robot,
                     const GainParams& gp, const GridMap& map) {
    const int w = map.width();
    const int h = map.height();
    std::vector<double> raw(static_cast<size_t>(w) * h);
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            const int flat = row * w + col;
            const Point2 center = map.center_of(Cell{row, col});
            raw[flat] = cell_entropy(beliefs.at(flat)) -
                        gp.beta_distance * distance(center, robot);
        }
    }

    GainField field;
    field.value.assign(raw.size(), 0.0);
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            double sum = 0.0;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int r = row + dr, c = col + dc;
                    if (r < 0 || r >= h || c < 0 || c >= w) continue;  // zero padding
                    sum += raw[r * w + c];
                }
            }
            field.value[row * w + col] = sum;
        }
    }
    return field;
}

std::vector<CellIndex> select_cells(const GainField& field, const GridMap& map,
                                    const GainParams& gp, Rng& rng,
                                    const std::vector<CellIndex>& candidates) {
    std::vector<CellIndex> pool = candidates;
    std::sort(pool.begin(), pool.end(), [&](CellIndex a, CellIndex b) {
        const Cell ca = map.cell_of(a), cb = map.cell_of(b);
        const double ga = field.at(ca.row * map.width() + ca.col);
        const double gb = field.at(cb.row * map.width() + cb.col);
        if (ga != gb) return ga > gb;
        return a < b;
    });

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<CellIndex> chosen;
    const int want = std::min<int>(gp.top_k, static_cast<int>(pool.size()));
    for (int slot = 0; slot < want; ++slot) {
        size_t pick = 0;
        if (coin(rng) < gp.epsilon_greedy) {
            std::uniform_int_distribution<size_t> uniform(0, pool.size() - 1);
            pick = uniform(rng);
        }
        chosen.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<long>(pick));
    }
    return chosen;
}

}  // namespace explore
