#pragma once

#include "pal/domain.hpp"
#include "pal/perception.hpp"

namespace pal {

enum class NewStateStrategy { ExtendVariable, AddBooleanVariable };

struct LearningParams {
    double alpha = 0.5;
    double beta = 0.5;
    double epsilon = 0.5;
    NewStateStrategy new_state_strategy = NewStateStrategy::ExtendVariable;

    void validate() const;
};

/// True when the best likelihood falls below (1 - epsilon) * max p_init.
bool needs_new_state(double max_like, double max_p_init, double epsilon);

/// The variable maximally affected by action a: argmax_i over states with a
/// defined gamma(s, a) of |{s : s[i] != gamma(s, a)[i]}|. Ties break toward
/// the lowest index; if no state has a defined transition, returns 0.
std::size_t select_variable(const Domain& d, ActionId a);

struct ExtensionResult {
    StateId s_new = kNoState;
    std::vector<StateId> added;  // S_new, s_new included
};

/// Grows the domain with S_new and initializes a perception for every new
/// state: s_new = s0 with the extended variable set to the fresh value,
/// seeded at the observation x; its siblings get p_init displaced by the
/// same offset x - mu(base).
ExtensionResult extend_states(Domain& d, PerceptionTable& pt, StateId s0, std::size_t var,
                              const Eigen::VectorXd& x);

/// Boolean-variable variant of Eq.-style state growth: |S_new| = |S|.
ExtensionResult add_boolean_variable(Domain& d, PerceptionTable& pt, StateId s0,
                                     const Eigen::VectorXd& x, const std::string& name);

/// Alpha-weighted transition revision for (s, a):
///   gamma'(s, a) = argmax_{s'} alpha * 1[s' = gamma(s, a)]
///                            + (1 - alpha) * |{i : Tr_i = <s, a, s'>}|.
/// Ties keep the current gamma(s, a) when it is in the argmax set, else the
/// lexicographically smallest candidate. When gamma(s, a) was undefined the
/// single observed successor is installed even at alpha = 1.
/// Returns true when the entry changed.
bool update_trans(Domain& d, const Histories& hist, StateId s, ActionId a, double alpha);

}  // namespace pal
