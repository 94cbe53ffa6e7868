#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace pal {

using StateId = std::uint32_t;
using ActionId = std::uint16_t;

/// A state is a total assignment of value indices, one per schema variable.
using Assignment = std::vector<std::uint32_t>;

inline constexpr StateId kNoState = 0xffffffffu;

struct AssignmentHash {
    std::size_t operator()(const Assignment& a) const noexcept {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto v : a) {
            h ^= v;
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

struct StateVar {
    std::string name;
    std::vector<std::string> values;
};

/// Ordered multi-valued state variables. Value lists are append-only, so
/// existing assignments stay valid when a variable's domain grows.
class StateVarSchema {
public:
    void add_variable(std::string name, std::vector<std::string> values);

    /// Appends a new value to variable `var` and returns its index.
    std::uint32_t extend_variable(std::size_t var, std::string value);

    std::size_t variable_count() const { return vars_.size(); }
    const StateVar& variable(std::size_t i) const { return vars_.at(i); }

    /// Product of variable cardinalities.
    std::size_t state_count() const;

    bool valid_assignment(const Assignment& a) const;

private:
    std::vector<StateVar> vars_;
};

/// The discrete part of an extended planning domain: the state set S
/// (interned assignments with dense ids), the action set A, and the
/// deterministic partial transition function.
class Domain {
public:
    Domain(StateVarSchema schema, std::vector<std::string> action_ids);

    const StateVarSchema& schema() const { return schema_; }
    StateVarSchema& schema() { return schema_; }

    std::size_t size() const { return states_.size(); }
    std::size_t action_count() const { return actions_.size(); }

    ActionId action(const std::string& id) const;
    const std::string& action_name(ActionId a) const { return actions_.at(a); }

    /// Interns an assignment, returning its (possibly new) id.
    StateId intern(const Assignment& a);
    std::optional<StateId> find(const Assignment& a) const;
    const Assignment& assignment(StateId s) const { return states_.at(s); }

    /// gamma(s, a), or kNoState when the transition is unknown.
    StateId successor(StateId s, ActionId a) const;
    void set_successor(StateId s, ActionId a, StateId target);
    void clear_successor(StateId s, ActionId a);

    /// States with a gamma edge into s (used by greedy argmax search).
    const std::vector<StateId>& predecessors(StateId s) const { return preds_.at(s); }

    /// Called when a variable gained a value or a variable was added.
    /// Re-validates nothing: indices of existing values never change.
    void note_schema_growth() {}

    /// Appends a fresh boolean-style variable, rewriting every stored
    /// assignment with the default value index 0.
    void add_variable_to_all(std::string name, std::vector<std::string> values);

private:
    StateVarSchema schema_;
    std::vector<std::string> actions_;
    std::vector<Assignment> states_;
    std::unordered_map<Assignment, StateId, AssignmentHash> index_;
    std::vector<StateId> gamma_;  // size() * action_count(), kNoState = undefined
    std::vector<std::vector<StateId>> preds_;

    void drop_pred(StateId target, StateId from);
};

/// Append-only transition and observation histories. Records keep the
/// assignment by value so later schema growth cannot corrupt them.
struct TransitionRecord {
    StateId s;
    ActionId a;
    StateId s_next;
    Assignment s_value;
    Assignment s_next_value;
};

struct ObservationRecord {
    StateId s;
    Assignment s_value;
    Eigen::VectorXd x;
};

class Histories {
public:
    void append_transition(const Domain& d, StateId s, ActionId a, StateId s_next);
    void append_observation(const Domain& d, StateId s, const Eigen::VectorXd& x);

    std::size_t transition_count() const { return tr_.size(); }
    std::size_t observation_count() const { return obs_.size(); }
    const TransitionRecord& transition(std::size_t i) const { return tr_.at(i); }
    const ObservationRecord& observation(std::size_t i) const { return obs_.at(i); }

    /// |{i : Tr_i = <s, a, s_next>}|
    int successor_count(StateId s, ActionId a, StateId s_next) const;

    /// All successors observed for (s, a), with their occurrence counts.
    const std::unordered_map<StateId, int>& successors_of(StateId s, ActionId a) const;

private:
    static std::uint64_t key(StateId s, ActionId a) {
        return (static_cast<std::uint64_t>(s) << 16) | a;
    }
    std::vector<TransitionRecord> tr_;
    std::vector<ObservationRecord> obs_;
    std::unordered_map<std::uint64_t, std::unordered_map<StateId, int>> counts_;
};

struct PlanningProblem {
    StateId current = kNoState;
    std::vector<StateId> goals;

    bool is_goal(StateId s) const {
        for (auto g : goals)
            if (g == s) return true;
        return false;
    }
};

/// True if a's assignment precedes b's in lexicographic order (shorter
/// assignments first; used only for deterministic tie-breaking).
bool assignment_less(const Assignment& a, const Assignment& b);

}  // namespace pal
