#include <doctest.h>

#include <cstdio>
#include <random>

#include "pal/world.hpp"

using namespace pal;

namespace {

Eigen::Matrix2d tiny_noise() { return 1e-18 * Eigen::Matrix2d::Identity(); }

Building fig_building() {
    Building b(3, 2);
    b.add_wall({1, 2}, {2, 2});
    b.add_wall({2, 1}, {2, 2});
    return b;
}

}  // namespace

TEST_SUITE("world") {

TEST_CASE("walls are symmetric and only between adjacent cells") {
    Building b = fig_building();
    CHECK(b.wall_count() == 2);
    CHECK(b.wall_between({1, 2}, {2, 2}));
    CHECK(b.wall_between({2, 2}, {1, 2}));
    CHECK_FALSE(b.wall_between({1, 1}, {2, 1}));
    CHECK_THROWS_AS(b.add_wall({1, 1}, {3, 1}), std::invalid_argument);
}

TEST_CASE("open moves displace one unit, walls and bounds block") {
    World w(fig_building(), tiny_noise(), AgentPose{{0.5, 0.5}, 0});
    std::mt19937_64 rng(7);

    Eigen::Vector2d x = w.act("e", rng);
    CHECK(w.pose().position.x() == doctest::Approx(1.5));
    CHECK(x.x() == doctest::Approx(1.5).epsilon(1e-6));

    // Wall between (2,1) and (2,2): the move does nothing.
    w.act("n", rng);
    CHECK(w.pose().position.x() == doctest::Approx(1.5));
    CHECK(w.pose().position.y() == doctest::Approx(0.5));

    // Boundary is implicitly walled.
    w.act("s", rng);
    CHECK(w.pose().position.y() == doctest::Approx(0.5));
}

TEST_CASE("reversibility on open cells is exact without noise") {
    World w(Building(3, 3), tiny_noise(), AgentPose{{1.5, 1.5}, 0});
    std::mt19937_64 rng(1);
    w.act("e", rng);
    w.act("w", rng);
    CHECK(w.pose().position.x() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(w.pose().position.y() == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("action_mean applies the wall-aware displacement") {
    World w(fig_building(), tiny_noise());
    Eigen::Vector2d x(1.51, 0.49);
    CHECK(w.action_mean("n", x) == x);  // blocked by the wall
    Eigen::Vector2d east = w.action_mean("e", x);
    CHECK(east.x() == doctest::Approx(2.51));
    CHECK(east.y() == doctest::Approx(0.49));
}

TEST_CASE("true_action_density peaks at the wall-aware target") {
    Eigen::Matrix2d sa = 1e-4 * Eigen::Matrix2d::Identity();
    World w(fig_building(), sa);
    Eigen::Vector2d x(0.5, 0.5);
    double peak = w.true_action_density("e", x, w.action_mean("e", x));
    CHECK(peak == doctest::Approx(1.0 / (2.0 * M_PI * 1e-4)).epsilon(1e-9));
    CHECK(w.true_action_density("e", x, Eigen::Vector2d(0.0, 0.0)) < peak);
}

TEST_CASE("unknown actions are rejected") {
    World w(Building(2, 2), tiny_noise());
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(w.act("jump", rng), std::invalid_argument);
}

TEST_CASE("observation noise matches sigma_a away from boundaries") {
    // Monte-Carlo check of act(): mean within 3 standard errors, covariance
    // within 5% in Frobenius norm. 7x7 building, acting from the center so
    // clamping never triggers.
    Eigen::Matrix2d sa;
    sa << 4e-4, 1e-4, 1e-4, 2e-4;
    World w(Building(7, 7), sa);
    std::mt19937_64 rng(42);
    const int n = 100000;
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    Eigen::Matrix2d sq = Eigen::Matrix2d::Zero();
    for (int i = 0; i < n; ++i) {
        w.reset_pose(AgentPose{{3.5, 3.5}, 0});
        Eigen::Vector2d d = w.act("e", rng) - Eigen::Vector2d(4.5, 3.5);
        sum += d;
        sq += d * d.transpose();
    }
    Eigen::Vector2d mean = sum / n;
    Eigen::Matrix2d cov = sq / n - mean * mean.transpose();
    const double se = std::sqrt(sa(0, 0) / n);
    CHECK(std::abs(mean.x()) < 3 * se);
    CHECK(std::abs(mean.y()) < 3 * se);
    CHECK((cov - sa).norm() < 0.05 * sa.norm());
}

TEST_CASE("pick and drop require a pack / a carried pack") {
    Building b(2, 1);
    b.add_pack({1, 1});
    World w(b, tiny_noise(), AgentPose{{0.5, 0.5}, 0});
    std::mt19937_64 rng(1);

    CHECK(w.loose_packs().size() == 1);
    w.act("pick", rng);
    CHECK(w.pose().carrying == 1);
    CHECK(w.loose_packs().empty());
    w.act("pick", rng);  // nothing here anymore: no-op
    CHECK(w.pose().carrying == 1);

    w.act("e", rng);
    w.act("drop", rng);
    CHECK(w.pose().carrying == 0);
    REQUIRE(w.loose_packs().size() == 1);
    CHECK(w.loose_packs()[0] == Cell{2, 1});
    w.act("drop", rng);  // nothing carried: no-op
    CHECK(w.pose().carrying == 0);
}

TEST_CASE("generated buildings are connected and seed-deterministic") {
    Building zero = generate_building(4, 4, 0.0, 0, 9);
    CHECK(zero.wall_count() == 0);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Building b = generate_building(6, 5, 0.6, 3, seed);
        CHECK(b.connected());
        CHECK(b.packs().size() == 3);
        Building again = generate_building(6, 5, 0.6, 3, seed);
        CHECK(b.walls() == again.walls());
        CHECK(b.packs() == again.packs());
    }
}

TEST_CASE("building fixture files round-trip bit-exactly") {
    Building b = generate_building(5, 4, 0.3, 2, 123);
    std::string text = save_building(b);
    Building loaded = load_building(text);
    CHECK(save_building(loaded) == text);
    CHECK(loaded.width() == b.width());
    CHECK(loaded.height() == b.height());
    CHECK(loaded.seed() == b.seed());
    CHECK(loaded.walls() == b.walls());
    CHECK(loaded.packs() == b.packs());

    const std::string path = "/tmp/pal_test_building.json";
    save_building_file(b, path);
    Building from_file = load_building_file(path);
    CHECK(save_building(from_file) == text);
    std::remove(path.c_str());
}

}
