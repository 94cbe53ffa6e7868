#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "pal/harness.hpp"
#include "pal/snapshot.hpp"

namespace {

struct RunOptions {
    std::string suite = "example1-sweep";
    std::vector<double> alphas, betas, epsilons;
    int reps = 0;
    std::uint64_t seed = 0;
    std::string out = "out";
    int max_steps = 0;
    std::string argmax = "exact";
    std::size_t max_states = 0;
    int checkpoint_interval = 0;
    int goals = 10;
    int workers = 0;
};

pal::ExperimentSpec to_spec(const RunOptions& opt) {
    pal::ExperimentSpec spec = pal::default_spec(pal::suite_from_name(opt.suite));
    if (!opt.alphas.empty()) spec.alphas = opt.alphas;
    if (!opt.betas.empty()) spec.betas = opt.betas;
    if (!opt.epsilons.empty()) spec.epsilons = opt.epsilons;
    if (opt.reps > 0) spec.reps = opt.reps;
    spec.seed = opt.seed;
    spec.max_steps = opt.max_steps;
    spec.argmax = opt.argmax == "greedy" ? pal::ArgmaxMode::Greedy : pal::ArgmaxMode::Exact;
    if (opt.max_states > 0) spec.max_states = opt.max_states;
    spec.checkpoint_interval = opt.checkpoint_interval;
    spec.goals = opt.goals;
    spec.workers = opt.workers;
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Plan-act-learn gridworld simulator"};
    app.require_subcommand(1);

    RunOptions ropt;
    auto* run_cmd = app.add_subcommand("run", "Execute an experiment suite");
    run_cmd->add_option("--suite", ropt.suite, "Suite name")
        ->check(CLI::IsMember({"example1-sweep", "from-scratch-5x5", "scalability-packs"}));
    run_cmd->add_option("--alpha", ropt.alphas, "Alpha grid values")->delimiter(',');
    run_cmd->add_option("--beta", ropt.betas, "Beta grid values")->delimiter(',');
    run_cmd->add_option("--epsilon", ropt.epsilons, "Epsilon grid values")->delimiter(',');
    run_cmd->add_option("--reps", ropt.reps, "Repetitions per grid cell");
    run_cmd->add_option("--seed", ropt.seed, "Master seed");
    run_cmd->add_option("--out", ropt.out, "Output directory");
    run_cmd->add_option("--max-steps", ropt.max_steps, "Step budget (per goal for 5x5)");
    run_cmd->add_option("--argmax", ropt.argmax, "State identification mode")
        ->check(CLI::IsMember({"exact", "greedy"}));
    run_cmd->add_option("--max-states", ropt.max_states, "State-creation cap (0: suite default)");
    run_cmd->add_option("--checkpoint-interval", ropt.checkpoint_interval,
                        "Divergence checkpoint cadence in steps");
    run_cmd->add_option("--goals", ropt.goals, "Goal-chain length for the 5x5 suite");
    run_cmd->add_option("--workers", ropt.workers,
                        "Worker pool size (default: PALSIM_WORKERS or hardware)");

    std::string replay_log, replay_out = "out";
    auto* replay_cmd = app.add_subcommand("replay", "Re-emit reports from a raw run log");
    replay_cmd->add_option("--log", replay_log, "runs.json raw log")->required();
    replay_cmd->add_option("--out", replay_out, "Output directory");

    auto* world_cmd = app.add_subcommand("world", "World utilities");
    world_cmd->require_subcommand(1);
    int gw = 5, gh = 5, gpacks = 0;
    double gdensity = 0.25;
    std::uint64_t gseed = 0;
    std::string gout = "building.json";
    auto* gen_cmd = world_cmd->add_subcommand("gen", "Generate a building fixture file");
    gen_cmd->add_option("--width", gw, "Rooms per row");
    gen_cmd->add_option("--height", gh, "Rooms per column");
    gen_cmd->add_option("--density", gdensity, "Interior wall density in [0,1]");
    gen_cmd->add_option("--packs", gpacks, "Number of packs");
    gen_cmd->add_option("--seed", gseed, "Generation seed");
    gen_cmd->add_option("--out", gout, "Fixture file path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            auto result = pal::run_suite(to_spec(ropt));
            pal::emit_reports(result, ropt.out);
            pal::write_raw_log(result, ropt.out + "/runs.json");
            std::printf("%zu runs, reports in %s\n", result.runs.size(), ropt.out.c_str());
        } else if (replay_cmd->parsed()) {
            auto result = pal::load_raw_log(replay_log);
            pal::emit_reports(result, replay_out);
            std::printf("re-emitted reports for %zu runs in %s\n", result.runs.size(),
                        replay_out.c_str());
        } else if (world_cmd->parsed()) {
            auto b = pal::generate_building(gw, gh, gdensity, gpacks, gseed);
            pal::save_building_file(b, gout);
            std::printf("%dx%d building with %zu walls, %zu packs -> %s\n", b.width(),
                        b.height(), b.wall_count(), b.packs().size(), gout.c_str());
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
