#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

namespace pal {

struct Cell {
    int x = 0;  // room column, 1-based
    int y = 0;  // room row, 1-based
    bool operator==(const Cell&) const = default;
};

/// Rectangular building of unit rooms. Room (i, j) spans
/// [i-1, i] x [j-1, j]; walls sit between orthogonally adjacent cells and
/// the boundary is implicitly walled.
class Building {
public:
    Building(int width, int height, std::uint64_t seed = 0);

    int width() const { return width_; }
    int height() const { return height_; }
    std::uint64_t seed() const { return seed_; }

    void add_wall(Cell a, Cell b);
    void remove_wall(Cell a, Cell b);
    bool wall_between(Cell a, Cell b) const;
    std::size_t wall_count() const { return walls_.size(); }
    std::vector<std::pair<Cell, Cell>> walls() const;

    void add_pack(Cell c) { packs_.push_back(c); }
    const std::vector<Cell>& packs() const { return packs_; }
    std::vector<Cell>& packs() { return packs_; }

    bool in_bounds(Cell c) const {
        return c.x >= 1 && c.x <= width_ && c.y >= 1 && c.y <= height_;
    }
    Cell cell_of(const Eigen::Vector2d& p) const;
    static Eigen::Vector2d center(Cell c) { return {c.x - 0.5, c.y - 0.5}; }

    /// True when moving one unit in direction (dx, dy) from `from` is
    /// stopped by a wall or the boundary.
    bool blocked(Cell from, int dx, int dy) const;

    /// The open-cell adjacency graph is connected.
    bool connected() const;

private:
    static std::uint64_t edge_key(Cell a, Cell b);
    int width_;
    int height_;
    std::uint64_t seed_;
    std::unordered_set<std::uint64_t> walls_;
    std::vector<Cell> packs_;
};

/// Candidate interior walls are sampled independently with probability
/// `wall_density`, then removed in seeded order until the open-cell graph is
/// connected. Deterministic under the seed.
Building generate_building(int width, int height, double wall_density, int packs,
                           std::uint64_t seed);

/// Fixture file round trip (load(save(b)) == b, bit exact).
std::string save_building(const Building& b);
Building load_building(const std::string& text);
void save_building_file(const Building& b, const std::string& path);
Building load_building_file(const std::string& path);

struct AgentPose {
    Eigen::Vector2d position{0.5, 0.5};
    int carrying = 0;
};

/// Ground-truth continuous environment: geometry, pack state, and the
/// per-action sensor/actuator noise sigma_a.
class World {
public:
    World(Building building, Eigen::Matrix2d sigma_a, AgentPose start = {});

    const Building& building() const { return building_; }
    const Eigen::Matrix2d& sigma_a() const { return sigma_a_; }
    const AgentPose& pose() const { return pose_; }
    void reset_pose(AgentPose p) { pose_ = p; }
    const std::vector<Cell>& loose_packs() const { return loose_packs_; }

    /// Executes an action: unit moves blocked by walls leave the pose
    /// unchanged; pick/drop adjust the carried pack count. Returns the
    /// noisy observation of the new position, clamped inside the building.
    Eigen::Vector2d act(const std::string& action, std::mt19937_64& rng);

    /// Expected position after `action` from x: the wall-aware displacement
    /// a(x) (identity when the move is blocked or the action moves nothing).
    Eigen::Vector2d action_mean(const std::string& action, const Eigen::Vector2d& x) const;

    /// Density of N(x_next; a(x), sigma_a).
    double true_action_density(const std::string& action, const Eigen::Vector2d& x,
                               const Eigen::Vector2d& x_next) const;

    static bool is_move(const std::string& action, int& dx, int& dy);

private:
    Eigen::Vector2d clamp(Eigen::Vector2d p) const;
    Building building_;
    Eigen::Matrix2d sigma_a_;
    AgentPose pose_;
    std::vector<Cell> loose_packs_;
};

}  // namespace pal
