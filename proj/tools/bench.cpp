#include <chrono>
#include <cstdio>
#include <random>

#include "pal/coherence.hpp"
#include "pal/fixtures.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Grows the pack-world model to roughly `target` states by appending values
// to the room-column variable.
void grow_states(pal::Session& s, std::size_t target) {
    while (s.domain.size() < target) {
        pal::fixtures::add_state(
            s, 0, Eigen::Vector2d(0.5 + (s.domain.size() % 10), 0.5 + (s.domain.size() % 7)));
    }
}

void bench_argmax(std::size_t states, int queries) {
    pal::Session s = pal::fixtures::pack_world_session(7);
    grow_states(s, states);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::vector<Eigen::Vector2d> xs(queries);
    for (auto& x : xs) x = {u(rng), u(rng)};

    auto t0 = Clock::now();
    std::size_t check_serial = 0;
    for (const auto& x : xs)
        check_serial += s.perceptions.argmax_exhaustive_serial(s.domain, x).state;
    const double serial = seconds_since(t0);

    t0 = Clock::now();
    std::size_t check_parallel = 0;
    for (const auto& x : xs)
        check_parallel += s.perceptions.argmax_exhaustive_parallel(s.domain, x).state;
    const double parallel = seconds_since(t0);

    std::printf("argmax  |S|=%-8zu q=%-5d serial %8.3f ms  parallel %8.3f ms  speedup %5.2fx  %s\n",
                s.domain.size(), queries, 1e3 * serial, 1e3 * parallel, serial / parallel,
                check_serial == check_parallel ? "identical" : "MISMATCH");
}

void bench_divergence(int walks) {
    pal::Session s = pal::fixtures::six_room_session();
    pal::DivergenceSettings cfg;
    cfg.walks = walks;
    cfg.walk_length = 30;
    cfg.seed = 11;

    auto t0 = Clock::now();
    auto serial = pal::estimate_divergence_serial(s.domain, s.perceptions, s.world, cfg);
    const double ts = seconds_since(t0);

    t0 = Clock::now();
    auto parallel = pal::estimate_divergence(s.domain, s.perceptions, s.world, cfg);
    const double tp = seconds_since(t0);

    std::printf("diverge walks=%-6d        serial %8.3f ms  parallel %8.3f ms  speedup %5.2fx  %s\n",
                walks, 1e3 * ts, 1e3 * tp, ts / tp,
                serial.value == parallel.value ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
    for (std::size_t states : {600u, 10000u, 100000u}) bench_argmax(states, 200);
    for (int walks : {100, 1000, 10000}) bench_divergence(walks);
    return 0;
}
