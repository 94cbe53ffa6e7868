#include "pal/pal.hpp"

#include <chrono>

#include "pal/rng.hpp"

namespace pal {

namespace {

void take_checkpoint(const Session& session, const RunConfig& cfg,
                     const Eigen::Vector2d& start, int step, RunOutcome& out) {
    if (cfg.checkpoint_interval <= 0) return;
    if (!out.checkpoints.empty() && out.checkpoints.back().step == step) return;
    DivergenceSettings ds = cfg.divergence;
    // Checkpoints sample from the run's start pose so they are comparable.
    if (!ds.start) ds.start = start;
    ds.seed = derive_seed(cfg.divergence.seed, static_cast<std::uint64_t>(step) + 1);
    auto est = estimate_divergence(session.domain, session.perceptions, session.world, ds);
    out.checkpoints.push_back({step, session.domain.size(), est.value});
}

}  // namespace

RunOutcome run(Session& session, const std::vector<StateId>& goals, const RunConfig& cfg) {
    cfg.learn.validate();
    if (goals.empty()) throw std::invalid_argument("run needs a non-empty goal set");
    if (cfg.max_steps < 1) throw std::invalid_argument("max_steps must be positive");

    Domain& d = session.domain;
    PerceptionTable& pt = session.perceptions;
    Histories& hist = session.histories;
    World& world = session.world;
    ExplorationState& exp = session.exploration;

    std::mt19937_64 rng(cfg.seed);
    PlanningProblem problem;
    problem.goals = goals;

    RunOutcome out;
    const Eigen::Vector2d start_pose = world.pose().position;
    StateId s0 = pt.max_likelihood_state(d, start_pose, kNoState, cfg.argmax,
                                         cfg.exact_threshold)
                     .state;
    exp.note_visit(s0);
    take_checkpoint(session, cfg, start_pose, 0, out);

    int step = 0;
    while (!problem.is_goal(s0) && step < cfg.max_steps) {
        problem.current = s0;
        Policy policy = plan(d, pt, problem, exp, rng);
        ++out.replans;

        bool structure_changed = false;
        while (!structure_changed && policy.defined_at(s0) && !problem.is_goal(s0) &&
               step < cfg.max_steps) {
            const auto t0 = std::chrono::steady_clock::now();
            const std::size_t states_before = d.size();

            const ActionId a = policy.at(s0);
            const Eigen::Vector2d x = world.act(d.action_name(a), rng);
            ++step;

            const StateId predicted = d.successor(s0, a);
            auto best = pt.max_likelihood_state(d, x, predicted == kNoState ? s0 : predicted,
                                                cfg.argmax, cfg.exact_threshold);
            StateId s1 = best.state;

            bool created = false;
            if (needs_new_state(best.likelihood, pt.max_p_init(), cfg.learn.epsilon) &&
                d.size() < cfg.max_states) {
                if (cfg.learn.new_state_strategy == NewStateStrategy::ExtendVariable) {
                    const std::size_t var = select_variable(d, a);
                    s1 = extend_states(d, pt, s0, var, x).s_new;
                } else {
                    s1 = add_boolean_variable(d, pt, s0, x, "b" + std::to_string(step)).s_new;
                }
                created = true;
            }

            hist.append_transition(d, s0, a, s1);
            hist.append_observation(d, s1, x);
            if (!created) pt.update(s1, x, cfg.learn.beta);
            const bool gamma_changed = update_trans(d, hist, s0, a, cfg.learn.alpha);
            structure_changed = gamma_changed || created;

            ++exp.step;
            exp.note_visit(s1);
            exp.previous_action = a;
            exp.has_previous = true;

            out.events.push_back({step, a, x, s0, s1, best.likelihood, created, gamma_changed,
                                  policy.kind == PolicyKind::GoalDirected});
            s0 = s1;

            const auto t1 = std::chrono::steady_clock::now();
            out.loop_times.emplace_back(states_before,
                                        std::chrono::duration<double>(t1 - t0).count());
            if (cfg.checkpoint_interval > 0 && step % cfg.checkpoint_interval == 0)
                take_checkpoint(session, cfg, start_pose, step, out);
        }
    }

    take_checkpoint(session, cfg, start_pose, step, out);
    out.goal_reached = problem.is_goal(s0);
    out.steps_used = step;
    out.final_state_count = d.size();
    return out;
}

}  // namespace pal
