#include "pal/domain.hpp"

#include <algorithm>

namespace pal {

void StateVarSchema::add_variable(std::string name, std::vector<std::string> values) {
    if (values.empty()) throw std::invalid_argument("variable domain must be non-empty");
    for (const auto& v : vars_)
        if (v.name == name) throw std::invalid_argument("duplicate variable name: " + name);
    vars_.push_back({std::move(name), std::move(values)});
}

std::uint32_t StateVarSchema::extend_variable(std::size_t var, std::string value) {
    auto& v = vars_.at(var);
    v.values.push_back(std::move(value));
    return static_cast<std::uint32_t>(v.values.size() - 1);
}

std::size_t StateVarSchema::state_count() const {
    std::size_t n = 1;
    for (const auto& v : vars_) n *= v.values.size();
    return n;
}

bool StateVarSchema::valid_assignment(const Assignment& a) const {
    if (a.size() != vars_.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] >= vars_[i].values.size()) return false;
    return true;
}

Domain::Domain(StateVarSchema schema, std::vector<std::string> action_ids)
    : schema_(std::move(schema)), actions_(std::move(action_ids)) {
    if (actions_.empty()) throw std::invalid_argument("action set must be non-empty");
    for (std::size_t i = 0; i < actions_.size(); ++i)
        for (std::size_t j = i + 1; j < actions_.size(); ++j)
            if (actions_[i] == actions_[j])
                throw std::invalid_argument("duplicate action id: " + actions_[i]);
}

ActionId Domain::action(const std::string& id) const {
    for (std::size_t i = 0; i < actions_.size(); ++i)
        if (actions_[i] == id) return static_cast<ActionId>(i);
    throw std::invalid_argument("unknown action id: " + id);
}

StateId Domain::intern(const Assignment& a) {
    if (!schema_.valid_assignment(a))
        throw std::invalid_argument("assignment does not validate against schema");
    auto it = index_.find(a);
    if (it != index_.end()) return it->second;
    auto id = static_cast<StateId>(states_.size());
    states_.push_back(a);
    index_.emplace(a, id);
    gamma_.resize(states_.size() * actions_.size(), kNoState);
    preds_.emplace_back();
    return id;
}

std::optional<StateId> Domain::find(const Assignment& a) const {
    auto it = index_.find(a);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

StateId Domain::successor(StateId s, ActionId a) const {
    return gamma_.at(static_cast<std::size_t>(s) * actions_.size() + a);
}

void Domain::drop_pred(StateId target, StateId from) {
    auto& p = preds_.at(target);
    auto it = std::find(p.begin(), p.end(), from);
    if (it != p.end()) p.erase(it);
}

void Domain::set_successor(StateId s, ActionId a, StateId target) {
    auto& slot = gamma_.at(static_cast<std::size_t>(s) * actions_.size() + a);
    if (slot == target) return;
    if (slot != kNoState) drop_pred(slot, s);
    slot = target;
    auto& p = preds_.at(target);
    if (std::find(p.begin(), p.end(), s) == p.end()) p.push_back(s);
}

void Domain::clear_successor(StateId s, ActionId a) {
    auto& slot = gamma_.at(static_cast<std::size_t>(s) * actions_.size() + a);
    if (slot != kNoState) drop_pred(slot, s);
    slot = kNoState;
}

void Domain::add_variable_to_all(std::string name, std::vector<std::string> values) {
    schema_.add_variable(std::move(name), std::move(values));
    index_.clear();
    for (StateId id = 0; id < states_.size(); ++id) {
        states_[id].push_back(0);
        index_.emplace(states_[id], id);
    }
}

void Histories::append_transition(const Domain& d, StateId s, ActionId a, StateId s_next) {
    tr_.push_back({s, a, s_next, d.assignment(s), d.assignment(s_next)});
    counts_[key(s, a)][s_next] += 1;
}

void Histories::append_observation(const Domain& d, StateId s, const Eigen::VectorXd& x) {
    obs_.push_back({s, d.assignment(s), x});
}

int Histories::successor_count(StateId s, ActionId a, StateId s_next) const {
    auto it = counts_.find(key(s, a));
    if (it == counts_.end()) return 0;
    auto jt = it->second.find(s_next);
    return jt == it->second.end() ? 0 : jt->second;
}

const std::unordered_map<StateId, int>& Histories::successors_of(StateId s, ActionId a) const {
    static const std::unordered_map<StateId, int> empty;
    auto it = counts_.find(key(s, a));
    return it == counts_.end() ? empty : it->second;
}

bool assignment_less(const Assignment& a, const Assignment& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace pal
