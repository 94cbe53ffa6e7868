#pragma once

#include "pal/coherence.hpp"
#include "pal/domain.hpp"
#include "pal/learning.hpp"
#include "pal/perception.hpp"
#include "pal/planner.hpp"
#include "pal/world.hpp"

namespace pal {

struct RunConfig {
    LearningParams learn;
    int max_steps = 1000;
    std::uint64_t seed = 0;
    ArgmaxMode argmax = ArgmaxMode::Exact;
    std::size_t exact_threshold = 4096;
    std::size_t max_states = 200000;

    /// Divergence checkpoint cadence in action steps; 0 disables checkpoints.
    int checkpoint_interval = 0;
    DivergenceSettings divergence;
};

struct StepEvent {
    int step = 0;
    ActionId action = 0;
    Eigen::Vector2d x{0.0, 0.0};
    StateId s_before = kNoState;
    StateId s_after = kNoState;
    double likelihood = 0.0;
    bool created = false;
    bool gamma_changed = false;
    bool goal_directed = false;
};

struct Checkpoint {
    int step = 0;
    std::size_t states = 0;
    double divergence = 0.0;
};

struct RunOutcome {
    bool goal_reached = false;
    int steps_used = 0;
    std::size_t final_state_count = 0;
    int replans = 0;
    std::vector<StepEvent> events;
    std::vector<Checkpoint> checkpoints;
    /// (|S| at the step, wall seconds the step took); scalability data.
    std::vector<std::pair<std::size_t, double>> loop_times;
};

/// The lifelong model plus the environment it acts in. Everything mutates
/// in place across runs, so a sequence of goals shares one learned model.
struct Session {
    Domain domain;
    PerceptionTable perceptions;
    Histories histories;
    World world;
    ExplorationState exploration;
};

/// Plan-act-learn until a goal state is perceived or `max_steps` actions
/// are spent. Replans whenever the policy runs out or the model structure
/// changed (transition revision or state creation).
RunOutcome run(Session& session, const std::vector<StateId>& goals, const RunConfig& cfg);

}  // namespace pal
