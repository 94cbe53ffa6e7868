#include "pal/harness.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pal/rng.hpp"

namespace pal {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double round6(double v) { return std::strtod(fmt6(v).c_str(), nullptr); }

Cell random_cell_except(std::mt19937_64& rng, int width, int height, Cell avoid) {
    std::uniform_int_distribution<int> ux(1, width), uy(1, height);
    for (;;) {
        Cell c{ux(rng), uy(rng)};
        if (!(c == avoid)) return c;
    }
}

RunLog finish_log(RunLog log) {
    if (log.checkpoints.size() >= 2) {
        log.has_divergence = true;
        log.initial_divergence = log.checkpoints.front().divergence;
        log.final_divergence = log.checkpoints.back().divergence;
        if (log.initial_divergence > 0.0)
            log.pct_learned = (log.initial_divergence - log.final_divergence) /
                              log.initial_divergence;
    }
    return log;
}

RunLog run_example1(const ExperimentSpec& spec, double a, double b, double e,
                    std::size_t cell, int rep) {
    Session session = fixtures::two_room_session();
    RunConfig cfg;
    cfg.learn = {a, b, e, NewStateStrategy::ExtendVariable};
    cfg.max_steps = spec.effective_max_steps();
    cfg.seed = derive_seed(spec.seed, cell, rep, 1);
    cfg.argmax = spec.argmax;
    cfg.max_states = spec.max_states;
    cfg.checkpoint_interval = spec.effective_checkpoint_interval();
    cfg.divergence.walks = 50;
    cfg.divergence.walk_length = 20;
    cfg.divergence.seed = derive_seed(spec.seed, cell, rep, 2);

    RunOutcome out = run(session, {fixtures::two_room_goal(session)}, cfg);
    RunLog log{a, b, e, rep, cfg.seed};
    log.goals_reached = out.goal_reached;
    log.steps = out.steps_used;
    log.final_states = out.final_state_count;
    log.checkpoints = std::move(out.checkpoints);
    log.loop_times = std::move(out.loop_times);
    return finish_log(std::move(log));
}

RunLog run_five_by_five(const ExperimentSpec& spec, double a, double b, double e,
                        std::size_t cell, int rep) {
    std::mt19937_64 goal_rng(derive_seed(spec.seed, cell, rep, 3));
    const Cell first_goal = random_cell_except(goal_rng, 5, 5, {1, 1});
    Session session = fixtures::five_by_five_session(derive_seed(spec.seed, cell, rep, 4),
                                                     first_goal);

    RunLog log{a, b, e, rep, derive_seed(spec.seed, cell, rep, 1)};
    log.goals_reached = true;
    for (int g = 0; g < spec.goals; ++g) {
        StateId goal_state;
        if (g == 0) {
            goal_state = 1;
        } else {
            // A fresh goal arrives as a perception. If no state accounts for
            // it (same epsilon gate as in-run state creation), the model is
            // extended with a new goal state, as it was for the first goal.
            Cell cur = session.world.building().cell_of(session.world.pose().position);
            Cell c = random_cell_except(goal_rng, 5, 5, cur);
            const Eigen::Vector2d x_g = Building::center(c);
            auto best = session.perceptions.max_likelihood_state(session.domain, x_g,
                                                                 kNoState, ArgmaxMode::Exact);
            if (needs_new_state(best.likelihood, session.perceptions.max_p_init(), e))
                goal_state = fixtures::add_state(session, 0, x_g);
            else
                goal_state = best.state;
        }

        RunConfig cfg;
        cfg.learn = {a, b, e, NewStateStrategy::ExtendVariable};
        cfg.max_steps = spec.effective_max_steps();
        cfg.seed = derive_seed(spec.seed, cell, rep, 10 + g);
        cfg.argmax = spec.argmax;
        cfg.max_states = spec.max_states;
        cfg.checkpoint_interval = spec.effective_checkpoint_interval();
        cfg.divergence.seed = derive_seed(spec.seed, cell, rep, 100 + g);

        const int base = log.steps;
        RunOutcome out = run(session, {goal_state}, cfg);
        log.goals_reached = log.goals_reached && out.goal_reached;
        log.steps += out.steps_used;
        log.final_states = out.final_state_count;
        for (std::size_t i = 0; i < out.checkpoints.size(); ++i) {
            if (g > 0 && i == 0 && out.checkpoints[i].step == 0)
                continue;  // duplicates the previous goal's final checkpoint
            Checkpoint cp = out.checkpoints[i];
            cp.step += base;
            log.checkpoints.push_back(cp);
        }
        for (auto& lt : out.loop_times) log.loop_times.push_back(lt);
    }
    return finish_log(std::move(log));
}

RunLog run_packs(const ExperimentSpec& spec, double a, double b, double e, std::size_t cell,
                 int rep) {
    Session session = fixtures::pack_world_session(derive_seed(spec.seed, cell, rep, 4));
    // Carry every pack to the far corner: a goal hard enough that the run
    // spends its whole step budget growing the model.
    StateId goal_state = *session.domain.find({9, 9, 5});

    RunConfig cfg;
    cfg.learn = {a, b, e, NewStateStrategy::ExtendVariable};
    cfg.max_steps = spec.effective_max_steps();
    cfg.seed = derive_seed(spec.seed, cell, rep, 1);
    cfg.argmax = spec.argmax;
    cfg.max_states = spec.max_states;
    cfg.checkpoint_interval = spec.effective_checkpoint_interval();
    cfg.divergence.seed = derive_seed(spec.seed, cell, rep, 2);

    RunOutcome out = run(session, {goal_state}, cfg);
    RunLog log{a, b, e, rep, cfg.seed};
    log.goals_reached = out.goal_reached;
    log.steps = out.steps_used;
    log.final_states = out.final_state_count;
    log.checkpoints = std::move(out.checkpoints);
    log.loop_times = std::move(out.loop_times);
    return finish_log(std::move(log));
}

RunLog run_one(const ExperimentSpec& spec, double a, double b, double e, std::size_t cell,
               int rep) {
    switch (spec.suite) {
        case Suite::Example1Sweep: return run_example1(spec, a, b, e, cell, rep);
        case Suite::FromScratch5x5: return run_five_by_five(spec, a, b, e, cell, rep);
        case Suite::ScalabilityPacks: return run_packs(spec, a, b, e, cell, rep);
    }
    throw std::logic_error("unknown suite");
}

}  // namespace

std::string suite_name(Suite s) {
    switch (s) {
        case Suite::Example1Sweep: return "example1-sweep";
        case Suite::FromScratch5x5: return "from-scratch-5x5";
        case Suite::ScalabilityPacks: return "scalability-packs";
    }
    throw std::logic_error("unknown suite");
}

Suite suite_from_name(const std::string& name) {
    if (name == "example1-sweep") return Suite::Example1Sweep;
    if (name == "from-scratch-5x5") return Suite::FromScratch5x5;
    if (name == "scalability-packs") return Suite::ScalabilityPacks;
    throw std::invalid_argument("unknown suite: " + name);
}

ExperimentSpec default_spec(Suite suite) {
    ExperimentSpec spec;
    spec.suite = suite;
    if (suite == Suite::ScalabilityPacks) {
        spec.alphas = {0.5};
        spec.betas = {0.0};
        spec.epsilons = {0.001};
        spec.reps = 1;
        spec.max_states = 250000;
    }
    return spec;
}

void ExperimentSpec::validate() const {
    if (reps < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (alphas.empty() || betas.empty() || epsilons.empty())
        throw std::invalid_argument("parameter grid must be non-empty");
    for (double v : alphas)
        if (v < 0.0 || v > 1.0) throw std::invalid_argument("alpha grid values must be in [0,1]");
    for (double v : betas)
        if (v < 0.0 || v > 1.0) throw std::invalid_argument("beta grid values must be in [0,1]");
    for (double v : epsilons)
        if (v < 0.0 || v > 1.0)
            throw std::invalid_argument("epsilon grid values must be in [0,1]");
    if (goals < 1) throw std::invalid_argument("goal-chain length must be >= 1");
}

int ExperimentSpec::effective_max_steps() const {
    if (max_steps > 0) return max_steps;
    switch (suite) {
        case Suite::Example1Sweep: return 100;
        case Suite::FromScratch5x5: return 200;
        case Suite::ScalabilityPacks: return 6000;
    }
    return 100;
}

int ExperimentSpec::effective_checkpoint_interval() const {
    if (checkpoint_interval < 0) return 0;  // divergence tracking disabled
    if (checkpoint_interval > 0) return checkpoint_interval;
    switch (suite) {
        case Suite::Example1Sweep: return effective_max_steps();
        case Suite::FromScratch5x5: return 25;
        case Suite::ScalabilityPacks: return 0;  // timing only, no divergence
    }
    return 0;
}

int worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PALSIM_WORKERS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

SuiteResult run_suite(const ExperimentSpec& spec) {
    spec.validate();
    struct Job {
        double a, b, e;
        std::size_t cell;
        int rep;
    };
    std::vector<Job> jobs;
    std::size_t cell = 0;
    for (double a : spec.alphas)
        for (double b : spec.betas)
            for (double e : spec.epsilons) {
                for (int r = 0; r < spec.reps; ++r) jobs.push_back({a, b, e, cell, r});
                ++cell;
            }

    std::vector<RunLog> runs(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    const int workers = worker_count(spec.workers);
    const auto n = static_cast<long>(jobs.size());
#ifdef _OPENMP
#pragma omp parallel for num_threads(workers) schedule(dynamic)
#endif
    for (long i = 0; i < n; ++i) {
        try {
            const Job& j = jobs[static_cast<std::size_t>(i)];
            runs[static_cast<std::size_t>(i)] = run_one(spec, j.a, j.b, j.e, j.cell, j.rep);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    (void)workers;
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);

    SuiteResult result{spec, std::move(runs), {}};
    result.rows = aggregate(spec, result.runs);
    return result;
}

std::vector<AggregateRow> aggregate(const ExperimentSpec& spec,
                                    const std::vector<RunLog>& runs) {
    std::vector<AggregateRow> rows;
    std::size_t i = 0;
    for (double a : spec.alphas)
        for (double b : spec.betas)
            for (double e : spec.epsilons) {
                AggregateRow row{a, b, e, 0.0, 0.0, 0.0};
                int with_div = 0, reached = 0;
                for (int r = 0; r < spec.reps; ++r, ++i) {
                    const RunLog& log = runs.at(i);
                    row.mean_states += static_cast<double>(log.final_states);
                    if (log.has_divergence) {
                        row.mean_pct_learned += log.pct_learned;
                        ++with_div;
                    }
                    if (log.goals_reached) ++reached;
                }
                row.mean_states /= spec.reps;
                if (with_div > 0) row.mean_pct_learned /= with_div;
                row.pct_goal = 100.0 * reached / spec.reps;
                rows.push_back(row);
            }
    return rows;
}

void emit_reports(const SuiteResult& result, const std::string& dir) {
    if (result.runs.empty()) throw std::invalid_argument("no runs to report");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir);

    {
        std::ofstream out(dir + "/table1.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write table1.csv");
        out << "alpha,beta,epsilon,S,pct_lrn,pct_G\n";
        for (const auto& row : result.rows)
            out << fmt6(row.alpha) << ',' << fmt6(row.beta) << ',' << fmt6(row.epsilon) << ','
                << fmt6(row.mean_states) << ',' << fmt6(row.mean_pct_learned) << ','
                << fmt6(row.pct_goal) << '\n';
    }

    {
        ordered_json j;
        j["suite"] = suite_name(result.spec.suite);
        j["seed"] = result.spec.seed;
        ordered_json runs = ordered_json::array();
        for (const auto& log : result.runs) {
            ordered_json cps = ordered_json::array();
            for (const auto& cp : log.checkpoints)
                cps.push_back({{"step", cp.step},
                               {"states", cp.states},
                               {"divergence", round6(cp.divergence)}});
            runs.push_back({{"alpha", round6(log.alpha)},
                            {"beta", round6(log.beta)},
                            {"epsilon", round6(log.epsilon)},
                            {"rep", log.rep},
                            {"seed", log.seed},
                            {"goals_reached", log.goals_reached},
                            {"steps", log.steps},
                            {"final_states", log.final_states},
                            {"pct_learned", round6(log.pct_learned)},
                            {"checkpoints", cps}});
        }
        j["runs"] = runs;
        std::ofstream out(dir + "/trace.json", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write trace.json");
        out << j.dump(2) << '\n';
    }

    {
        // Median loop seconds per |S| range, ascending. Individual step
        // times are too jittery to plot raw (replans, thread scheduling,
        // occasional allocator spikes), so steps are pooled into equal-width
        // |S| buckets and each bucket reports its median time at its mean
        // state count.
        std::vector<std::pair<std::size_t, double>> samples;
        for (const auto& log : result.runs)
            for (const auto& lt : log.loop_times) samples.push_back(lt);
        std::ofstream out(dir + "/scaling.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write scaling.csv");
        out << "states,seconds\n";
        if (!samples.empty()) {
            std::size_t lo = samples.front().first, hi = samples.front().first;
            for (const auto& [s, t] : samples) {
                lo = std::min(lo, s);
                hi = std::max(hi, s);
            }
            const int nb = hi > lo ? 20 : 1;
            const double width = hi > lo ? static_cast<double>(hi - lo) / nb : 1.0;
            struct Bucket {
                double s_sum = 0;
                std::vector<double> times;
            };
            std::vector<Bucket> buckets(nb);
            for (const auto& [s, t] : samples) {
                int i = hi > lo ? std::min(nb - 1, static_cast<int>((s - lo) / width)) : 0;
                buckets[i].s_sum += static_cast<double>(s);
                buckets[i].times.push_back(t);
            }
            for (auto& b : buckets) {
                if (b.times.empty()) continue;
                std::sort(b.times.begin(), b.times.end());
                const std::size_t n = b.times.size();
                const double med = n % 2 ? b.times[n / 2]
                                         : 0.5 * (b.times[n / 2 - 1] + b.times[n / 2]);
                out << fmt6(b.s_sum / n) << ',' << fmt6(med) << '\n';
            }
        }
    }
}

void write_raw_log(const SuiteResult& result, const std::string& path) {
    ordered_json spec;
    spec["suite"] = suite_name(result.spec.suite);
    spec["alphas"] = result.spec.alphas;
    spec["betas"] = result.spec.betas;
    spec["epsilons"] = result.spec.epsilons;
    spec["reps"] = result.spec.reps;
    spec["seed"] = result.spec.seed;
    spec["max_steps"] = result.spec.max_steps;
    spec["argmax"] = result.spec.argmax == ArgmaxMode::Exact ? "exact" : "greedy";
    spec["max_states"] = result.spec.max_states;
    spec["checkpoint_interval"] = result.spec.checkpoint_interval;
    spec["goals"] = result.spec.goals;

    ordered_json runs = ordered_json::array();
    for (const auto& log : result.runs) {
        ordered_json cps = ordered_json::array();
        for (const auto& cp : log.checkpoints)
            cps.push_back({{"step", cp.step}, {"states", cp.states}, {"divergence", cp.divergence}});
        ordered_json lts = ordered_json::array();
        for (const auto& [states, seconds] : log.loop_times)
            lts.push_back({states, seconds});
        runs.push_back({{"alpha", log.alpha},
                        {"beta", log.beta},
                        {"epsilon", log.epsilon},
                        {"rep", log.rep},
                        {"seed", log.seed},
                        {"goals_reached", log.goals_reached},
                        {"steps", log.steps},
                        {"final_states", log.final_states},
                        {"has_divergence", log.has_divergence},
                        {"initial_divergence", log.initial_divergence},
                        {"final_divergence", log.final_divergence},
                        {"pct_learned", log.pct_learned},
                        {"checkpoints", cps},
                        {"loop_times", lts}});
    }

    ordered_json j;
    j["format"] = "palsim-raw-log";
    j["version"] = 1;
    j["spec"] = spec;
    j["runs"] = runs;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

SuiteResult load_raw_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    ordered_json j = ordered_json::parse(in);
    if (j.value("format", "") != "palsim-raw-log")
        throw std::invalid_argument(path + " is not a raw run log");

    const auto& sj = j.at("spec");
    ExperimentSpec spec;
    spec.suite = suite_from_name(sj.at("suite"));
    spec.alphas = sj.at("alphas").get<std::vector<double>>();
    spec.betas = sj.at("betas").get<std::vector<double>>();
    spec.epsilons = sj.at("epsilons").get<std::vector<double>>();
    spec.reps = sj.at("reps");
    spec.seed = sj.at("seed");
    spec.max_steps = sj.at("max_steps");
    spec.argmax = sj.at("argmax") == "greedy" ? ArgmaxMode::Greedy : ArgmaxMode::Exact;
    spec.max_states = sj.at("max_states");
    spec.checkpoint_interval = sj.at("checkpoint_interval");
    spec.goals = sj.at("goals");

    SuiteResult result{spec, {}, {}};
    for (const auto& rj : j.at("runs")) {
        RunLog log;
        log.alpha = rj.at("alpha");
        log.beta = rj.at("beta");
        log.epsilon = rj.at("epsilon");
        log.rep = rj.at("rep");
        log.seed = rj.at("seed");
        log.goals_reached = rj.at("goals_reached");
        log.steps = rj.at("steps");
        log.final_states = rj.at("final_states");
        log.has_divergence = rj.at("has_divergence");
        log.initial_divergence = rj.at("initial_divergence");
        log.final_divergence = rj.at("final_divergence");
        log.pct_learned = rj.at("pct_learned");
        for (const auto& cj : rj.at("checkpoints"))
            log.checkpoints.push_back({cj.at("step"), cj.at("states"), cj.at("divergence")});
        for (const auto& lj : rj.at("loop_times"))
            log.loop_times.emplace_back(lj.at(0).get<std::size_t>(), lj.at(1).get<double>());
        result.runs.push_back(std::move(log));
    }
    result.rows = aggregate(spec, result.runs);
    return result;
}

}  // namespace pal
