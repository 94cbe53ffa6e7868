#pragma once

#include <random>
#include <unordered_map>

#include "pal/domain.hpp"
#include "pal/perception.hpp"

namespace pal {

enum class PolicyKind { GoalDirected, Exploratory };

struct Policy {
    std::unordered_map<StateId, ActionId> map;
    PolicyKind kind = PolicyKind::GoalDirected;

    bool defined_at(StateId s) const { return map.count(s) > 0; }
    ActionId at(StateId s) const { return map.at(s); }
};

/// Recency bookkeeping the exploratory policy relies on.
struct ExplorationState {
    std::unordered_map<StateId, long> last_visit;
    long step = 0;
    ActionId previous_action = static_cast<ActionId>(-1);
    bool has_previous = false;

    void note_visit(StateId s) { last_visit[s] = step; }
    long visited_at(StateId s) const {
        auto it = last_visit.find(s);
        return it == last_visit.end() ? -1 : it->second;
    }
};

/// A* over gamma with unit edge costs and a Euclidean heuristic on
/// perception means, scaled to be admissible by the longest gamma edge.
/// Returns a goal-directed policy for a minimum-hop path, or an exploratory
/// one-step policy when no goal is reachable.
Policy plan(const Domain& d, const PerceptionTable& pt, const PlanningProblem& problem,
            const ExplorationState& exp, std::mt19937_64& rng);

/// One-step exploratory policy at `current`: prefer actions with gamma
/// undefined, then least recently visited predicted successors, breaking
/// remaining ties with the seeded RNG; the immediately previous action is
/// avoided when an equally preferred alternative exists.
Policy explore(const Domain& d, StateId current, const ExplorationState& exp,
               std::mt19937_64& rng);

/// Minimum-hop A* path (actions) from `from` to any goal; empty optional
/// when unreachable. Exposed for the shortest-path oracle tests.
std::optional<std::vector<ActionId>> shortest_path(const Domain& d, const PerceptionTable& pt,
                                                   StateId from,
                                                   const std::vector<StateId>& goals);

}  // namespace pal
