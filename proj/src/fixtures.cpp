#include "pal/fixtures.hpp"

namespace pal::fixtures {

namespace {

const std::vector<std::string> kMoves = {"n", "s", "e", "w"};

Eigen::Matrix2d action_noise() { return 1e-4 * Eigen::Matrix2d::Identity(); }

Building walled_building() {
    Building b(3, 2);
    b.add_wall({1, 2}, {2, 2});
    b.add_wall({2, 1}, {2, 2});
    return b;
}

std::vector<std::string> value_names(int n) {
    std::vector<std::string> v;
    for (int i = 1; i <= n; ++i) v.push_back(std::to_string(i));
    return v;
}

}  // namespace

// The covariance floor sits well above the action noise: tightened states
// keep enough spread that a stale wrong transition is penalized by the
// divergence without dwarfing every other term.
Session two_room_session(double sigma_floor) {
    StateVarSchema schema;
    schema.add_variable("x", value_names(2));
    schema.add_variable("y", value_names(2));
    Domain d(std::move(schema), kMoves);

    // Row-major s11, s21, s12, s22.
    for (int j = 1; j <= 2; ++j)
        for (int i = 1; i <= 2; ++i)
            d.intern({static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1)});

    auto id = [&](int i, int j) {
        return *d.find({static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1)});
    };
    const ActionId n = d.action("n"), s = d.action("s"), e = d.action("e"), w = d.action("w");
    d.set_successor(id(1, 1), e, id(2, 1));
    d.set_successor(id(1, 1), n, id(1, 2));
    d.set_successor(id(1, 2), e, id(2, 2));
    d.set_successor(id(1, 2), s, id(1, 1));
    d.set_successor(id(2, 1), w, id(1, 1));
    d.set_successor(id(2, 1), n, id(2, 2));
    d.set_successor(id(2, 2), w, id(1, 2));
    d.set_successor(id(2, 2), s, id(2, 1));

    PerceptionTable pt(2, 0.1 * Eigen::Matrix2d::Identity(), sigma_floor);
    for (int j = 1; j <= 2; ++j)
        for (int i = 1; i <= 2; ++i)
            pt.set(id(i, j), Eigen::Vector2d(i - 0.5, j - 0.5),
                   0.1 * Eigen::Matrix2d::Identity());

    World world(walled_building(), action_noise(), AgentPose{{0.5, 0.5}, 0});
    return Session{std::move(d), std::move(pt), {}, std::move(world), {}};
}

StateId two_room_goal(const Session& s) { return *s.domain.find({1, 1}); }

Session six_room_session(double sigma_floor) {
    StateVarSchema schema;
    schema.add_variable("x", value_names(3));
    schema.add_variable("y", value_names(2));
    Domain d(std::move(schema), kMoves);
    for (int j = 1; j <= 2; ++j)
        for (int i = 1; i <= 3; ++i)
            d.intern({static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1)});

    auto id = [&](int i, int j) {
        return *d.find({static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1)});
    };
    const Building b = walled_building();
    const StateId unexplored = id(2, 2);

    PerceptionTable pt(2, 0.1 * Eigen::Matrix2d::Identity(), sigma_floor);
    for (int j = 1; j <= 2; ++j)
        for (int i = 1; i <= 3; ++i) {
            const bool visited = id(i, j) != unexplored;
            pt.set(id(i, j), Eigen::Vector2d(i - 0.5, j - 0.5),
                   visited ? action_noise() : Eigen::Matrix2d(0.1 * Eigen::Matrix2d::Identity()),
                   visited ? 10 : 0);
        }

    const int dxs[] = {0, 0, 1, -1};
    const int dys[] = {1, -1, 0, 0};
    for (int j = 1; j <= 2; ++j)
        for (int i = 1; i <= 3; ++i) {
            if (id(i, j) == unexplored) continue;  // never acted there
            for (ActionId a = 0; a < 4; ++a) {
                Cell from{i, j};
                if (b.blocked(from, dxs[a], dys[a]))
                    d.set_successor(id(i, j), a, id(i, j));
                else
                    d.set_successor(id(i, j), a, id(i + dxs[a], j + dys[a]));
            }
        }

    World world(b, action_noise(), AgentPose{{0.5, 0.5}, 0});
    return Session{std::move(d), std::move(pt), {}, std::move(world), {}};
}

Session perfect_room_session() {
    StateVarSchema schema;
    schema.add_variable("x", value_names(1));
    Domain d(std::move(schema), kMoves);
    StateId s0 = d.intern({0});
    for (ActionId a = 0; a < 4; ++a) d.set_successor(s0, a, s0);

    PerceptionTable pt(2, action_noise(), 1e-6);
    pt.set(s0, Eigen::Vector2d(0.5, 0.5), action_noise());

    World world(Building(1, 1), action_noise(), AgentPose{{0.5, 0.5}, 0});
    return Session{std::move(d), std::move(pt), {}, std::move(world), {}};
}

Session five_by_five_session(std::uint64_t seed, Cell goal, double sigma_floor) {
    StateVarSchema schema;
    schema.add_variable("loc", value_names(2));
    Domain d(std::move(schema), kMoves);
    StateId s0 = d.intern({0});
    StateId sg = d.intern({1});

    PerceptionTable pt(2, 0.1 * Eigen::Matrix2d::Identity(), sigma_floor);
    pt.set(s0, Eigen::Vector2d(0.5, 0.5), 0.1 * Eigen::Matrix2d::Identity(), 1);
    pt.set(sg, Building::center(goal), 0.1 * Eigen::Matrix2d::Identity(), 0);

    Building b = generate_building(5, 5, 0.25, 0, seed);
    World world(std::move(b), action_noise(), AgentPose{{0.5, 0.5}, 0});
    return Session{std::move(d), std::move(pt), {}, std::move(world), {}};
}

Session pack_world_session(std::uint64_t seed, double sigma_floor) {
    StateVarSchema schema;
    schema.add_variable("x", value_names(10));
    schema.add_variable("y", value_names(10));
    std::vector<std::string> counts;
    for (int i = 0; i <= 5; ++i) counts.push_back(std::to_string(i));
    schema.add_variable("packs", std::move(counts));

    std::vector<std::string> actions = kMoves;
    actions.push_back("pick");
    actions.push_back("drop");
    Domain d(std::move(schema), std::move(actions));

    PerceptionTable pt(2, 0.1 * Eigen::Matrix2d::Identity(), sigma_floor);
    for (std::uint32_t j = 0; j < 10; ++j)
        for (std::uint32_t i = 0; i < 10; ++i)
            for (std::uint32_t p = 0; p < 6; ++p) {
                StateId s = d.intern({i, j, p});
                pt.set(s, Eigen::Vector2d(i + 0.5, j + 0.5),
                       0.1 * Eigen::Matrix2d::Identity());
            }

    Building b = generate_building(10, 10, 0.2, 5, seed);
    // Noisier sensors than the floor keeps one-observation covariances
    // overconfident, which sustains state creation at small epsilon.
    World world(std::move(b), 0.01 * Eigen::Matrix2d::Identity(), AgentPose{{0.5, 0.5}, 0});
    return Session{std::move(d), std::move(pt), {}, std::move(world), {}};
}

StateId add_state(Session& s, std::size_t var, const Eigen::Vector2d& mu) {
    auto& schema = s.domain.schema();
    const auto v =
        schema.extend_variable(var, std::to_string(schema.variable(var).values.size() + 1));
    Assignment a = s.domain.assignment(0);
    a[var] = v;
    StateId id = s.domain.intern(a);
    s.perceptions.init_displaced(id, mu);
    return id;
}

}  // namespace pal::fixtures
