#include <doctest.h>

#include <cmath>
#include <set>

#include "explore/sensing.hpp"

using namespace explore;

namespace {

GridMap open_map(int w, int h) {
    return GridMap(w, h, 0.5, std::vector<uint8_t>(static_cast<size_t>(w) * h, 0));
}

RayCountMap counts_with(const GridMap& map, std::initializer_list<std::pair<int, int>> list) {
    RayCountMap rc(map.cell_count());
    for (auto [flat, n] : list)
        for (int i = 0; i < n; ++i) rc.increment(flat);
    return rc;
}

}  // namespace

TEST_CASE("uncertain scanner geometry") {
    const GridMap m = open_map(21, 21);
    Pose pose;
    pose.position = m.center_of(Cell{10, 10});
    pose.heading = 0.0;
    const SensorParams sp;  // R = 1.5, 72 rays
    Rng rng(1);

    SUBCASE("zero noise in open space puts every endpoint at range R") {
        const Scan scan = scan_uncertain(m, pose, sp, NoiseParams{0.0, 0.0}, rng);
        REQUIRE(scan.rays.size() == 72);
        for (const ScanRay& ray : scan.rays)
            CHECK(distance(pose.position, ray.endpoint) == doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("zero noise against a wall stops on the near face") {
        GridMap walled = GridMap::parse_text(
            "5 3 0.5\n"
            ".....\n"
            "...#.\n"
            ".....\n");
        Pose p2;
        p2.position = walled.center_of(Cell{1, 1});  // wall cell is (1,3), 2 ahead
        const SensorParams wide{2.5, 72};
        const Scan scan = scan_uncertain(walled, p2, wide, NoiseParams{0.0, 0.0}, rng);
        // Ray 0 points along +x; the wall face is at x = 3.
        CHECK(scan.rays[0].endpoint.x == doctest::Approx(3.0).epsilon(1e-6));
        CHECK(scan.rays[0].endpoint.x < 3.0);  // pulled back into free space
        CHECK(scan.rays[0].endpoint.y == doctest::Approx(1.5));
    }
    SUBCASE("sample mean of a noisy ray converges to the true endpoint") {
        const NoiseParams np{0.1, 0.1};
        double sx = 0.0, sy = 0.0;
        const int n = 10000;
        Rng noisy_rng(42);
        for (int i = 0; i < n; ++i) {
            const Scan scan = scan_uncertain(m, pose, sp, np, noisy_rng);
            sx += scan.rays[0].endpoint.x;
            sy += scan.rays[0].endpoint.y;
        }
        const double tol = 3.0 * 0.1 / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(sx / n - (pose.position.x + 1.5)) < tol);
        CHECK(std::abs(sy / n - pose.position.y) < tol);
    }
    SUBCASE("scan from an occupied cell is a simulation error") {
        GridMap walled = GridMap::parse_text("3 1 0.5\n.#.\n");
        Pose bad;
        bad.position = walled.center_of(Cell{0, 1});
        CHECK_THROWS_AS(scan_uncertain(walled, bad, sp, NoiseParams{}, rng),
                        SimulationError);
    }
}

TEST_CASE("ray count accumulation") {
    const GridMap m = open_map(21, 21);
    Pose pose;
    pose.position = m.center_of(Cell{10, 10});
    const SensorParams sp;

    SUBCASE("one full scan marks the robot's own cell 72 times") {
        Rng rng(3);
        RayCountMap rc(m.cell_count());
        const Scan scan = scan_uncertain(m, pose, sp, NoiseParams{0.0, 0.0}, rng);
        accumulate(rc, m, scan);
        const Cell own = m.cell_at(pose.position);
        CHECK(rc.count(own.row * m.width() + own.col) == 72);
    }
    SUBCASE("a single ray promotes the sentinel and increments") {
        RayCountMap rc(m.cell_count());
        Scan scan;
        scan.origin = pose.position;
        scan.rays.push_back({0.0, pose.position + Point2{1.2, 0.0}});
        accumulate(rc, m, scan);
        const Cell own = m.cell_at(pose.position);
        const int flat = own.row * m.width() + own.col;
        CHECK(rc.count(flat) == 1);
        CHECK(rc.count(flat + 1) == 1);
        CHECK(rc.count(flat + 2) == -1);
    }
    SUBCASE("two identical scans double every touched count") {
        Rng rng(5);
        const Scan scan = scan_uncertain(m, pose, sp, NoiseParams{0.0, 0.0}, rng);
        RayCountMap once(m.cell_count());
        accumulate(once, m, scan);
        RayCountMap twice(m.cell_count());
        accumulate(twice, m, scan);
        accumulate(twice, m, scan);
        for (int i = 0; i < m.cell_count(); ++i) {
            if (once.count(i) < 0) CHECK(twice.count(i) == -1);
            else CHECK(twice.count(i) == 2 * once.count(i));
        }
    }
    SUBCASE("zero-noise endpoints mark exactly the traverse_ray cells") {
        Rng rng(9);
        std::uniform_real_distribution<double> u(2.0, 19.0);
        for (int trial = 0; trial < 100; ++trial) {
            Pose p;
            p.position = {u(rng), u(rng)};
            p.heading = 0.37 * trial;
            const Scan scan = scan_uncertain(m, p, sp, NoiseParams{0.0, 0.0}, rng);
            RayCountMap rc(m.cell_count());
            accumulate(rc, m, scan);
            std::set<int> expected;
            for (const ScanRay& ray : scan.rays)
                for (const Cell& c : m.traverse_ray(p.position, ray.endpoint))
                    expected.insert(c.row * m.width() + c.col);
            for (int i = 0; i < m.cell_count(); ++i)
                CHECK((rc.count(i) >= 0) == (expected.count(i) > 0));
        }
    }
    SUBCASE("occupied cells are never touched under zero noise") {
        GridMap walled = GridMap::parse_text(
            "7 7 0.5\n"
            ".......\n"
            ".......\n"
            "..###..\n"
            ".......\n"
            "..#....\n"
            ".......\n"
            ".......\n");
        Rng rng(13);
        RayCountMap rc(walled.cell_count());
        std::uniform_real_distribution<double> u(0.1, 6.9);
        int scans = 0;
        while (scans < 50) {
            Pose p;
            p.position = {u(rng), u(rng)};
            p.heading = 0.0;
            if (walled.occupied(walled.cell_at(p.position))) continue;
            accumulate(rc, walled,
                       scan_uncertain(walled, p, SensorParams{3.0, 72}, NoiseParams{0.0, 0.0}, rng));
            ++scans;
        }
        for (int row = 0; row < walled.height(); ++row)
            for (int col = 0; col < walled.width(); ++col)
                if (walled.occupied(Cell{row, col}))
                    CHECK(rc.count(row * walled.width() + col) == -1);
    }
}

TEST_CASE("belief update formula") {
    const GridMap m = open_map(10, 10);

    SUBCASE("anchors at n = 0, 36, 72 with map max 72") {
        RayCountMap rc = counts_with(m, {{0, 72}, {1, 36}});
        rc.increment(2);  // n = 1 elsewhere
        const BeliefMap b = update_beliefs(rc);
        CHECK(b.at(0) == doctest::Approx(0.0).epsilon(1e-7));
        CHECK(b.at(1) == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(b.at(3) == 1.0);  // untouched stays at 1
    }
    SUBCASE("n = 0 after promotion keeps p = 1") {
        RayCountMap rc = counts_with(m, {{0, 72}});
        // A cell whose sentinel was promoted but never incremented would
        // carry n = 0; the formula maps it to 1 exactly.
        const BeliefMap b = update_beliefs(rc);
        CHECK(b.at(5) == 1.0);
    }
    SUBCASE("all-sentinel map is all ones") {
        RayCountMap rc(m.cell_count());
        const BeliefMap b = update_beliefs(rc);
        for (int i = 0; i < m.cell_count(); ++i) CHECK(b.at(i) == 1.0);
    }
    SUBCASE("counts above the cap behave like 72") {
        RayCountMap rc = counts_with(m, {{0, 300}, {1, 72}});
        const BeliefMap b = update_beliefs(rc);
        CHECK(b.at(0) == doctest::Approx(b.at(1)));
    }
    SUBCASE("invariant to cell ordering") {
        RayCountMap a = counts_with(m, {{0, 10}, {1, 20}, {2, 72}});
        RayCountMap b = counts_with(m, {{2, 72}, {1, 20}, {0, 10}});
        const BeliefMap ba = update_beliefs(a);
        const BeliefMap bb = update_beliefs(b);
        for (int i = 0; i < m.cell_count(); ++i) CHECK(ba.at(i) == bb.at(i));
    }
    SUBCASE("monotone once the map max saturates") {
        RayCountMap rc = counts_with(m, {{0, 72}, {1, 20}});
        double prev = update_beliefs(rc).at(1);
        for (int extra = 0; extra < 60; ++extra) {
            rc.increment(1);
            const double cur = update_beliefs(rc).at(1);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("ideal sensor") {
    const GridMap m = open_map(9, 9);
    const Point2 c = m.center_of(Cell{4, 4});
    CHECK(scan_ideal(m, c, 1.0).size() == 5);
    CHECK(scan_ideal(m, c, 0.4).size() == 1);
    CHECK(scan_ideal(m, c, 1.5).size() == 9);

    GridMap walled = GridMap::parse_text("3 1 0.5\n.#.\n");
    CHECK_THROWS_AS(scan_ideal(walled, walled.center_of(Cell{0, 1}), 1.0),
                    SimulationError);
}

TEST_CASE("confident-empty threshold") {
    const GridMap m = open_map(4, 4);
    RayCountMap rc = counts_with(m, {{0, 14}, {1, 13}});
    CHECK(is_confident_empty(rc, 0));
    CHECK_FALSE(is_confident_empty(rc, 1));
    CHECK_FALSE(is_confident_empty(rc, 2));  // never observed
}
