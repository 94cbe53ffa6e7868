#include "pal/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace pal {

namespace {

// Longest gamma edge between distinct perception means; the heuristic is
// scaled by its inverse so that straight-line distance never overestimates
// the hop count.
double max_edge_length(const Domain& d, const PerceptionTable& pt) {
    double longest = 0.0;
    for (StateId s = 0; s < d.size(); ++s)
        for (ActionId a = 0; a < d.action_count(); ++a) {
            StateId t = d.successor(s, a);
            if (t == kNoState || t == s) continue;
            longest = std::max(longest, (pt.at(s).mu - pt.at(t).mu).norm());
        }
    return longest;
}

struct QueueEntry {
    double f;
    double g;
    StateId s;
    bool operator>(const QueueEntry& o) const {
        if (f != o.f) return f > o.f;
        if (g != o.g) return g > o.g;
        return s > o.s;
    }
};

}  // namespace

std::optional<std::vector<ActionId>> shortest_path(const Domain& d, const PerceptionTable& pt,
                                                   StateId from,
                                                   const std::vector<StateId>& goals) {
    if (goals.empty()) throw std::invalid_argument("goal set must be non-empty");
    auto is_goal = [&](StateId s) {
        return std::find(goals.begin(), goals.end(), s) != goals.end();
    };
    if (is_goal(from)) return std::vector<ActionId>{};

    const double scale = max_edge_length(d, pt);
    auto h = [&](StateId s) {
        if (scale <= 0.0) return 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (StateId g : goals) best = std::min(best, (pt.at(s).mu - pt.at(g).mu).norm());
        return best / scale;
    };

    std::unordered_map<StateId, double> dist;
    std::unordered_map<StateId, std::pair<StateId, ActionId>> parent;
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
    dist[from] = 0.0;
    open.push({h(from), 0.0, from});

    while (!open.empty()) {
        auto [f, g, s] = open.top();
        open.pop();
        auto it = dist.find(s);
        if (it != dist.end() && g > it->second) continue;
        if (is_goal(s)) {
            std::vector<ActionId> actions;
            StateId cur = s;
            while (cur != from) {
                auto [p, a] = parent.at(cur);
                actions.push_back(a);
                cur = p;
            }
            std::reverse(actions.begin(), actions.end());
            return actions;
        }
        for (ActionId a = 0; a < d.action_count(); ++a) {
            StateId t = d.successor(s, a);
            if (t == kNoState || t == s) continue;
            double ng = g + 1.0;
            auto dt = dist.find(t);
            if (dt == dist.end() || ng < dt->second) {
                dist[t] = ng;
                parent[t] = {s, a};
                open.push({ng + h(t), ng, t});
            }
        }
    }
    return std::nullopt;
}

Policy explore(const Domain& d, StateId current, const ExplorationState& exp,
               std::mt19937_64& rng) {
    std::vector<ActionId> unknown, known;
    for (ActionId a = 0; a < d.action_count(); ++a) {
        if (d.successor(current, a) == kNoState)
            unknown.push_back(a);
        else
            known.push_back(a);
    }

    std::vector<ActionId> candidates;
    if (!unknown.empty()) {
        candidates = unknown;
    } else {
        // Least recently visited predicted successor first.
        long oldest = std::numeric_limits<long>::max();
        for (ActionId a : known) {
            long v = exp.visited_at(d.successor(current, a));
            if (v < oldest) {
                oldest = v;
                candidates.clear();
            }
            if (v == oldest) candidates.push_back(a);
        }
    }

    if (exp.has_previous && candidates.size() > 1) {
        auto it = std::find(candidates.begin(), candidates.end(), exp.previous_action);
        if (it != candidates.end()) candidates.erase(it);
    }

    ActionId pick = candidates.front();
    if (candidates.size() > 1) {
        std::uniform_int_distribution<std::size_t> u(0, candidates.size() - 1);
        pick = candidates[u(rng)];
    }

    Policy p;
    p.kind = PolicyKind::Exploratory;
    p.map.emplace(current, pick);
    return p;
}

Policy plan(const Domain& d, const PerceptionTable& pt, const PlanningProblem& problem,
            const ExplorationState& exp, std::mt19937_64& rng) {
    if (problem.goals.empty()) throw std::invalid_argument("goal set must be non-empty");
    auto path = shortest_path(d, pt, problem.current, problem.goals);
    if (!path) return explore(d, problem.current, exp, rng);

    Policy p;
    p.kind = PolicyKind::GoalDirected;
    StateId s = problem.current;
    for (ActionId a : *path) {
        p.map.try_emplace(s, a);  // paths are simple; keep the first assignment
        s = d.successor(s, a);
    }
    return p;
}

}  // namespace pal
