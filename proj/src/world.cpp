#include "pal/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace pal {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;

std::uint64_t cell_id(Cell c) {
    return (static_cast<std::uint64_t>(static_cast<std::uint16_t>(c.x)) << 16) |
           static_cast<std::uint16_t>(c.y);
}
}  // namespace

Building::Building(int width, int height, std::uint64_t seed)
    : width_(width), height_(height), seed_(seed) {
    if (width < 1 || height < 1) throw std::invalid_argument("building dimensions must be >= 1");
}

std::uint64_t Building::edge_key(Cell a, Cell b) {
    if (cell_id(a) > cell_id(b)) std::swap(a, b);
    return (cell_id(a) << 32) | cell_id(b);
}

void Building::add_wall(Cell a, Cell b) {
    if (!in_bounds(a) || !in_bounds(b) || std::abs(a.x - b.x) + std::abs(a.y - b.y) != 1)
        throw std::invalid_argument("walls must separate adjacent interior cells");
    walls_.insert(edge_key(a, b));
}

void Building::remove_wall(Cell a, Cell b) { walls_.erase(edge_key(a, b)); }

bool Building::wall_between(Cell a, Cell b) const { return walls_.count(edge_key(a, b)) > 0; }

std::vector<std::pair<Cell, Cell>> Building::walls() const {
    std::vector<std::pair<Cell, Cell>> out;
    for (int x = 1; x <= width_; ++x)
        for (int y = 1; y <= height_; ++y) {
            Cell c{x, y};
            if (x < width_ && wall_between(c, {x + 1, y})) out.push_back({c, {x + 1, y}});
            if (y < height_ && wall_between(c, {x, y + 1})) out.push_back({c, {x, y + 1}});
        }
    return out;
}

Cell Building::cell_of(const Eigen::Vector2d& p) const {
    Cell c{static_cast<int>(std::floor(p.x())) + 1, static_cast<int>(std::floor(p.y())) + 1};
    c.x = std::clamp(c.x, 1, width_);
    c.y = std::clamp(c.y, 1, height_);
    return c;
}

bool Building::blocked(Cell from, int dx, int dy) const {
    Cell to{from.x + dx, from.y + dy};
    if (!in_bounds(to)) return true;
    return wall_between(from, to);
}

bool Building::connected() const {
    std::vector<char> seen(static_cast<std::size_t>(width_) * height_, 0);
    auto idx = [&](Cell c) { return static_cast<std::size_t>(c.y - 1) * width_ + (c.x - 1); };
    std::queue<Cell> q;
    q.push({1, 1});
    seen[idx({1, 1})] = 1;
    std::size_t visited = 1;
    const int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    while (!q.empty()) {
        Cell c = q.front();
        q.pop();
        for (auto [dx, dy] : dirs) {
            if (blocked(c, dx, dy)) continue;
            Cell n{c.x + dx, c.y + dy};
            if (seen[idx(n)]) continue;
            seen[idx(n)] = 1;
            ++visited;
            q.push(n);
        }
    }
    return visited == static_cast<std::size_t>(width_) * height_;
}

Building generate_building(int width, int height, double wall_density, int packs,
                           std::uint64_t seed) {
    if (wall_density < 0.0 || wall_density > 1.0)
        throw std::invalid_argument("wall_density must lie in [0, 1]");
    Building b(width, height, seed);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    std::vector<std::pair<Cell, Cell>> candidates;
    for (int x = 1; x <= width; ++x)
        for (int y = 1; y <= height; ++y) {
            if (x < width) candidates.push_back({{x, y}, {x + 1, y}});
            if (y < height) candidates.push_back({{x, y}, {x, y + 1}});
        }
    std::vector<std::pair<Cell, Cell>> placed;
    for (auto& [c1, c2] : candidates)
        if (coin(rng) < wall_density) {
            b.add_wall(c1, c2);
            placed.push_back({c1, c2});
        }
    std::shuffle(placed.begin(), placed.end(), rng);
    while (!b.connected() && !placed.empty()) {
        auto [c1, c2] = placed.back();
        placed.pop_back();
        b.remove_wall(c1, c2);
    }

    std::uniform_int_distribution<int> px(1, width), py(1, height);
    for (int i = 0; i < packs; ++i) b.add_pack({px(rng), py(rng)});
    return b;
}

std::string save_building(const Building& b) {
    nlohmann::ordered_json j;
    j["width"] = b.width();
    j["height"] = b.height();
    j["seed"] = b.seed();
    auto walls = nlohmann::ordered_json::array();
    for (const auto& [c1, c2] : b.walls())
        walls.push_back({c1.x, c1.y, c2.x, c2.y});
    j["walls"] = walls;
    auto packs = nlohmann::ordered_json::array();
    for (const auto& p : b.packs()) packs.push_back({p.x, p.y});
    j["packs"] = packs;
    return j.dump(2) + "\n";
}

Building load_building(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Building b(j.at("width").get<int>(), j.at("height").get<int>(),
               j.at("seed").get<std::uint64_t>());
    for (const auto& w : j.at("walls"))
        b.add_wall({w.at(0).get<int>(), w.at(1).get<int>()},
                   {w.at(2).get<int>(), w.at(3).get<int>()});
    for (const auto& p : j.at("packs")) b.add_pack({p.at(0).get<int>(), p.at(1).get<int>()});
    return b;
}

void save_building_file(const Building& b, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write building fixture: " + path);
    f << save_building(b);
}

Building load_building_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read building fixture: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return load_building(ss.str());
}

World::World(Building building, Eigen::Matrix2d sigma_a, AgentPose start)
    : building_(std::move(building)), sigma_a_(std::move(sigma_a)), pose_(start) {
    loose_packs_ = building_.packs();
}

bool World::is_move(const std::string& action, int& dx, int& dy) {
    dx = dy = 0;
    if (action == "n") dy = 1;
    else if (action == "s") dy = -1;
    else if (action == "e") dx = 1;
    else if (action == "w") dx = -1;
    else return false;
    return true;
}

Eigen::Vector2d World::clamp(Eigen::Vector2d p) const {
    p.x() = std::clamp(p.x(), 0.0, static_cast<double>(building_.width()));
    p.y() = std::clamp(p.y(), 0.0, static_cast<double>(building_.height()));
    return p;
}

Eigen::Vector2d World::action_mean(const std::string& action, const Eigen::Vector2d& x) const {
    int dx, dy;
    if (!is_move(action, dx, dy)) return x;  // pick/drop move nothing
    Cell from = building_.cell_of(x);
    if (building_.blocked(from, dx, dy)) return x;
    return x + Eigen::Vector2d(dx, dy);
}

Eigen::Vector2d World::act(const std::string& action, std::mt19937_64& rng) {
    int dx, dy;
    if (is_move(action, dx, dy)) {
        pose_.position = action_mean(action, pose_.position);
    } else if (action == "pick") {
        Cell here = building_.cell_of(pose_.position);
        auto it = std::find(loose_packs_.begin(), loose_packs_.end(), here);
        if (it != loose_packs_.end()) {
            loose_packs_.erase(it);
            pose_.carrying += 1;
        }
    } else if (action == "drop") {
        Cell here = building_.cell_of(pose_.position);
        bool occupied = std::find(loose_packs_.begin(), loose_packs_.end(), here) !=
                        loose_packs_.end();
        if (!occupied && pose_.carrying > 0) {
            loose_packs_.push_back(here);
            pose_.carrying -= 1;
        }
    } else {
        throw std::invalid_argument("unknown action id: " + action);
    }

    Eigen::Vector2d obs = pose_.position;
    if (sigma_a_.norm() > 0.0) {
        Eigen::LLT<Eigen::Matrix2d> llt(sigma_a_);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("sigma_a must be positive semidefinite");
        std::normal_distribution<double> unit(0.0, 1.0);
        Eigen::Vector2d z{unit(rng), unit(rng)};
        obs += llt.matrixL() * z;
    }
    return clamp(obs);
}

double World::true_action_density(const std::string& action, const Eigen::Vector2d& x,
                                  const Eigen::Vector2d& x_next) const {
    Eigen::Vector2d mean = action_mean(action, x);
    Eigen::LLT<Eigen::Matrix2d> llt(sigma_a_);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("true_action_density requires positive definite sigma_a");
    Eigen::Vector2d d = x_next - mean;
    double log_det = 2.0 * (std::log(llt.matrixL()(0, 0)) + std::log(llt.matrixL()(1, 1)));
    Eigen::Vector2d w = llt.solve(d);
    return std::exp(-0.5 * (2.0 * kLog2Pi + log_det + d.dot(w)));
}

}  // namespace pal
