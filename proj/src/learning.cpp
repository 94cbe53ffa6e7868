#include "pal/learning.hpp"

#include <algorithm>
#include <unordered_map>

namespace pal {

void LearningParams::validate() const {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must lie in [0, 1]");
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("beta must lie in [0, 1]");
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must lie in [0, 1]");
}

bool needs_new_state(double max_like, double max_p_init, double epsilon) {
    return max_like < (1.0 - epsilon) * max_p_init;
}

std::size_t select_variable(const Domain& d, ActionId a) {
    const auto m = d.schema().variable_count();
    std::vector<std::size_t> affected(m, 0);
    for (StateId s = 0; s < d.size(); ++s) {
        StateId t = d.successor(s, a);
        if (t == kNoState) continue;
        const auto& sv = d.assignment(s);
        const auto& tv = d.assignment(t);
        for (std::size_t i = 0; i < m; ++i)
            if (sv[i] != tv[i]) ++affected[i];
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (affected[i] > affected[best]) best = i;
    return best;
}

namespace {

std::string fresh_value_name(const StateVar& var) {
    std::string name = std::to_string(var.values.size() + 1);
    while (std::find(var.values.begin(), var.values.end(), name) != var.values.end())
        name += "'";
    return name;
}

struct ProjHash {
    std::size_t operator()(const Assignment& a) const noexcept { return AssignmentHash{}(a); }
};

}  // namespace

ExtensionResult extend_states(Domain& d, PerceptionTable& pt, StateId s0, std::size_t var,
                              const Eigen::VectorXd& x) {
    const auto old_size = static_cast<StateId>(d.size());
    const auto v0 = d.assignment(s0)[var];
    const std::uint32_t v_new =
        d.schema().extend_variable(var, fresh_value_name(d.schema().variable(var)));

    // One new state per distinct assignment of the other variables; the base
    // representative prefers the state sharing s0's value on `var`.
    std::unordered_map<Assignment, StateId, ProjHash> bases;
    for (StateId s = 0; s < old_size; ++s) {
        Assignment proj = d.assignment(s);
        proj[var] = 0;
        auto [it, inserted] = bases.try_emplace(proj, s);
        if (!inserted && d.assignment(it->second)[var] != v0 && d.assignment(s)[var] == v0)
            it->second = s;
    }

    const Eigen::VectorXd offset = x - pt.at(s0).mu;
    Assignment target = d.assignment(s0);
    target[var] = v_new;

    ExtensionResult res;
    // Sort projections by base id for a creation order independent of hash
    // iteration order.
    std::vector<std::pair<StateId, Assignment>> ordered;
    ordered.reserve(bases.size());
    for (auto& [proj, base] : bases) ordered.emplace_back(base, proj);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });

    for (auto& [base, proj] : ordered) {
        Assignment a = proj;
        a[var] = v_new;
        StateId id = d.intern(a);
        res.added.push_back(id);
        if (a == target) {
            res.s_new = id;
            pt.init_seeded(id, x);
        } else {
            pt.init_displaced(id, pt.at(base).mu + offset);
        }
    }
    if (res.s_new == kNoState)
        throw std::logic_error("extend_states: s_new missing from S_new");
    return res;
}

ExtensionResult add_boolean_variable(Domain& d, PerceptionTable& pt, StateId s0,
                                     const Eigen::VectorXd& x, const std::string& name) {
    const auto old_size = static_cast<StateId>(d.size());
    d.add_variable_to_all(name, {"f", "t"});
    const Eigen::VectorXd offset = x - pt.at(s0).mu;

    ExtensionResult res;
    for (StateId s = 0; s < old_size; ++s) {
        Assignment a = d.assignment(s);
        a.back() = 1;
        StateId id = d.intern(a);
        res.added.push_back(id);
        if (s == s0) {
            res.s_new = id;
            pt.init_seeded(id, x);
        } else {
            pt.init_displaced(id, pt.at(s).mu + offset);
        }
    }
    return res;
}

bool update_trans(Domain& d, const Histories& hist, StateId s, ActionId a, double alpha) {
    const StateId cur = d.successor(s, a);
    const auto& observed = hist.successors_of(s, a);
    if (observed.empty()) return false;

    std::vector<std::pair<StateId, double>> scores;
    if (cur == kNoState) {
        // No current opinion: adopt the best-supported evidence.
        for (const auto& [cand, count] : observed)
            scores.emplace_back(cand, static_cast<double>(count));
    } else {
        scores.emplace_back(cur, alpha + (1.0 - alpha) * hist.successor_count(s, a, cur));
        for (const auto& [cand, count] : observed) {
            if (cand == cur) continue;
            scores.emplace_back(cand, (1.0 - alpha) * static_cast<double>(count));
        }
    }

    double top = scores.front().second;
    for (const auto& [_, sc] : scores) top = std::max(top, sc);

    StateId best = kNoState;
    for (const auto& [cand, sc] : scores) {
        if (sc != top) continue;
        if (cand == cur) {  // ties keep the current model
            best = cand;
            break;
        }
        if (best == kNoState || assignment_less(d.assignment(cand), d.assignment(best)))
            best = cand;
    }

    if (best == cur) return false;
    d.set_successor(s, a, best);
    return true;
}

}  // namespace pal
