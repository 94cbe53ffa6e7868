#pragma once

#include "pal/domain.hpp"
#include "pal/perception.hpp"
#include "pal/world.hpp"

namespace pal {

/// KL(N(mu0, s0) || N(mu1, s1)), in nats:
///   1/2 (tr(s1^-1 s0) + (mu1-mu0)^T s1^-1 (mu1-mu0) - n + ln det s1 / det s0)
double gaussian_kl(const Eigen::VectorXd& mu0, const Eigen::MatrixXd& s0,
                   const Eigen::VectorXd& mu1, const Eigen::MatrixXd& s1);

struct DivergenceEstimate {
    double value = 0.0;  // nats, mean over evaluated KL terms
    int walks = 0;
    int walk_length = 0;
    std::uint64_t seed = 0;
    long terms = 0;  // KL terms evaluated (actions with a defined transition)
};

struct DivergenceSettings {
    int walks = 100;
    int walk_length = 30;
    std::uint64_t seed = 0;
    ArgmaxMode argmax = ArgmaxMode::Exact;
    std::size_t exact_threshold = 4096;
    /// Walk start position; the world's current pose when unset.
    std::optional<Eigen::Vector2d> start;
};

/// Random-walk estimate of the model/world divergence: seeded uniform-action
/// walks through the building (positions follow the wall-aware action map),
/// and at every visited position the analytic KL between the true
/// post-action density N(a(x), sigma_a) and the model's prediction
/// N(mu, sigma) of gamma(a, argmax_s f(x, s)), averaged over all evaluated
/// terms. Where the transition is undefined the model predicts staying in
/// the current state at initialization uncertainty. Walks are evaluated in
/// parallel with per-walk derived seeds; results match the serial reference
/// exactly.
DivergenceEstimate estimate_divergence(const Domain& d, const PerceptionTable& pt,
                                       const World& world, const DivergenceSettings& cfg);

/// Serial reference implementation kept for testing.
DivergenceEstimate estimate_divergence_serial(const Domain& d, const PerceptionTable& pt,
                                              const World& world,
                                              const DivergenceSettings& cfg);

/// Relative reduction of divergence: (initial - final) / initial.
double percent_learned(const DivergenceEstimate& initial, const DivergenceEstimate& final_est);

}  // namespace pal
