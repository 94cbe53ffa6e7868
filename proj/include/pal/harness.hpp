#pragma once

#include <string>

#include "pal/fixtures.hpp"
#include "pal/pal.hpp"

namespace pal {

enum class Suite { Example1Sweep, FromScratch5x5, ScalabilityPacks };

std::string suite_name(Suite s);
Suite suite_from_name(const std::string& name);

struct ExperimentSpec {
    Suite suite = Suite::Example1Sweep;
    std::vector<double> alphas{0.0, 0.5, 1.0};
    std::vector<double> betas{0.0, 0.5, 1.0};
    std::vector<double> epsilons{0.0, 0.5, 1.0};
    int reps = 10;
    std::uint64_t seed = 0;
    int max_steps = 0;  // 0: suite default (per goal for the 5x5 chain)
    ArgmaxMode argmax = ArgmaxMode::Exact;
    std::size_t max_states = 100000;
    int checkpoint_interval = 0;  // 0: suite default
    int goals = 10;               // 5x5 goal-chain length
    int workers = 0;              // 0: PALSIM_WORKERS env, else hardware

    void validate() const;
    int effective_max_steps() const;
    int effective_checkpoint_interval() const;
};

/// Spec with the suite's default parameter grid: the full (alpha, beta,
/// epsilon) product for the sweeps, a single aggressive cell for the
/// scalability suite.
ExperimentSpec default_spec(Suite suite);

/// Per-run raw log; everything reports are derived from.
struct RunLog {
    double alpha = 0.0, beta = 0.0, epsilon = 0.0;
    int rep = 0;
    std::uint64_t seed = 0;
    bool goals_reached = false;  // all chained goals within budget
    int steps = 0;
    std::size_t final_states = 0;
    bool has_divergence = false;
    double initial_divergence = 0.0;
    double final_divergence = 0.0;
    double pct_learned = 0.0;
    std::vector<Checkpoint> checkpoints;
    std::vector<std::pair<std::size_t, double>> loop_times;
};

struct AggregateRow {
    double alpha = 0.0, beta = 0.0, epsilon = 0.0;
    double mean_states = 0.0;
    double mean_pct_learned = 0.0;
    double pct_goal = 0.0;  // percentage, 0..100
};

struct SuiteResult {
    ExperimentSpec spec;
    std::vector<RunLog> runs;  // cell-major, repetition-minor order
    std::vector<AggregateRow> rows;
};

/// Executes reps x grid-cells runs with independent derived seeds across a
/// worker pool (PALSIM_WORKERS overrides the size). Results are identical
/// regardless of execution order.
SuiteResult run_suite(const ExperimentSpec& spec);

/// Recomputes the aggregate rows from the raw logs.
std::vector<AggregateRow> aggregate(const ExperimentSpec& spec, const std::vector<RunLog>& runs);

/// Writes table1.csv, trace.json, and scaling.csv into `dir`. table1.csv and
/// trace.json are byte-stable under a fixed master seed; scaling.csv carries
/// wall-clock timings and is not.
void emit_reports(const SuiteResult& result, const std::string& dir);

/// Raw-log round trip; `replay` re-emits reports from this file.
void write_raw_log(const SuiteResult& result, const std::string& path);
SuiteResult load_raw_log(const std::string& path);

int worker_count(int requested);

}  // namespace pal
