#include <doctest.h>

#include <map>

#include "explore/gain.hpp"

using namespace explore;

namespace {

GridMap open_map(int w, int h) {
    return GridMap(w, h, 0.5, std::vector<uint8_t>(static_cast<size_t>(w) * h, 0));
}

BeliefMap uniform_beliefs(const GridMap& m, double p) {
    BeliefMap b;
    b.p.assign(static_cast<size_t>(m.cell_count()), p);
    return b;
}

}  // namespace

TEST_CASE("cell entropy") {
    CHECK(cell_entropy(0.5) == doctest::Approx(1.0));
    CHECK(cell_entropy(0.0) == 0.0);
    CHECK(cell_entropy(1.0) == 0.0);
    CHECK(cell_entropy(0.25) == doctest::Approx(0.811278).epsilon(1e-6));
    CHECK_THROWS_AS(cell_entropy(-0.1), std::domain_error);
    CHECK_THROWS_AS(cell_entropy(1.1), std::domain_error);
}

TEST_CASE("gain field") {
    const GridMap m = open_map(6, 6);
    GainParams gp;
    gp.beta_distance = 0.0;
    const Point2 robot = m.center_of(Cell{0, 0});

    SUBCASE("kernel sums with zero padding on a uniform 0.5 map") {
        const GainField f = gain_field(uniform_beliefs(m, 0.5), robot, gp, m);
        CHECK(f.at(2 * 6 + 2) == doctest::Approx(9.0));  // interior
        CHECK(f.at(0 * 6 + 2) == doctest::Approx(6.0));  // edge
        CHECK(f.at(0 * 6 + 0) == doctest::Approx(4.0));  // corner
    }
    SUBCASE("all-known map has zero gain") {
        const GainField f = gain_field(uniform_beliefs(m, 1.0), robot, gp, m);
        for (double v : f.value) CHECK(v == 0.0);
    }
    SUBCASE("single uncertain cell spreads over its 3x3 neighborhood") {
        BeliefMap b = uniform_beliefs(m, 1.0);
        b.p[3 * 6 + 3] = 0.5;
        const GainField f = gain_field(b, robot, gp, m);
        for (int row = 0; row < 6; ++row)
            for (int col = 0; col < 6; ++col) {
                const bool near = std::abs(row - 3) <= 1 && std::abs(col - 3) <= 1;
                CHECK(f.at(row * 6 + col) == doctest::Approx(near ? 1.0 : 0.0));
            }
    }
    SUBCASE("entropy term is translation equivariant") {
        BeliefMap b1 = uniform_beliefs(m, 1.0);
        b1.p[2 * 6 + 2] = 0.3;
        b1.p[2 * 6 + 3] = 0.6;
        BeliefMap b2 = uniform_beliefs(m, 1.0);
        b2.p[3 * 6 + 3] = 0.3;  // shifted by (+1,+1)
        b2.p[3 * 6 + 4] = 0.6;
        const GainField f1 = gain_field(b1, robot, gp, m);
        const GainField f2 = gain_field(b2, robot, gp, m);
        for (int row = 1; row < 5; ++row)
            for (int col = 1; col < 5; ++col)
                CHECK(f1.at(row * 6 + col) ==
                      doctest::Approx(f2.at((row + 1) * 6 + col + 1)));
    }
    SUBCASE("beta never favors the farther of two equal-entropy cells") {
        const BeliefMap b = uniform_beliefs(m, 0.5);
        const int near_flat = 1 * 6 + 1;
        const int far_flat = 4 * 6 + 4;
        double prev_margin = -1e9;
        for (double beta : {0.0, 0.05, 0.2, 1.0}) {
            GainParams g;
            g.beta_distance = beta;
            const GainField f = gain_field(b, robot, g, m);
            const double margin = f.at(near_flat) - f.at(far_flat);
            CHECK(margin >= prev_margin - 1e-12);
            prev_margin = margin;
        }
    }
}

TEST_CASE("epsilon-greedy selection") {
    const GridMap m = open_map(4, 4);
    GainField field;
    field.value.assign(16, 0.0);

    SUBCASE("greedy limit returns the argmax set in descending order") {
        // Distinct gains on candidates 1, 2, 3, 6 (indices j).
        std::map<CellIndex, double> gains{{1, 0.4}, {2, 0.9}, {3, 0.1}, {6, 0.7}};
        for (auto [j, g] : gains) {
            const Cell c = m.cell_of(j);
            field.value[c.row * 4 + c.col] = g;
        }
        GainParams gp;
        gp.epsilon_greedy = 0.0;
        gp.top_k = 3;
        Rng rng(1);
        const auto picked = select_cells(field, m, gp, rng, {1, 2, 3, 6});
        CHECK(picked == std::vector<CellIndex>{2, 6, 1});
    }
    SUBCASE("ties break toward the lower index") {
        GainParams gp;
        gp.epsilon_greedy = 0.0;
        gp.top_k = 1;
        Rng rng(1);
        const auto picked = select_cells(field, m, gp, rng, {9, 4, 7});
        REQUIRE(picked.size() == 1);
        CHECK(picked[0] == 4);
    }
    SUBCASE("returns min(top_k, candidates)") {
        GainParams gp;
        gp.epsilon_greedy = 0.0;
        gp.top_k = 5;
        Rng rng(1);
        CHECK(select_cells(field, m, gp, rng, {2, 3}).size() == 2);
        CHECK(select_cells(field, m, gp, rng, {}).empty());
    }
    SUBCASE("epsilon = 1 selects uniformly") {
        GainParams gp;
        gp.epsilon_greedy = 1.0;
        gp.top_k = 1;
        const std::vector<CellIndex> candidates{1, 5, 9, 13};
        std::map<CellIndex, int> freq;
        const int draws = 1000;
        for (int s = 0; s < draws; ++s) {
            Rng rng(1000 + s);
            const auto picked = select_cells(field, m, gp, rng, candidates);
            ++freq[picked.at(0)];
        }
        for (CellIndex j : candidates)
            CHECK(std::abs(freq[j] / static_cast<double>(draws) - 0.25) < 0.05);
    }
    SUBCASE("argmax choice is invariant to positive scaling of the field") {
        std::map<CellIndex, double> gains{{1, 0.4}, {2, 0.9}, {3, 0.1}, {6, 0.7}};
        for (auto [j, g] : gains) {
            const Cell c = m.cell_of(j);
            field.value[c.row * 4 + c.col] = g;
        }
        GainField scaled = field;
        for (double& v : scaled.value) v *= 37.5;
        GainParams gp;
        gp.epsilon_greedy = 0.0;
        gp.top_k = 4;
        Rng rng1(2), rng2(2);
        CHECK(select_cells(field, m, gp, rng1, {1, 2, 3, 6}) ==
              select_cells(scaled, m, gp, rng2, {1, 2, 3, 6}));
    }
}
