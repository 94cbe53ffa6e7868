#include "pal/coherence.hpp"

#include <cmath>

#include "pal/rng.hpp"

namespace pal {

double gaussian_kl(const Eigen::VectorXd& mu0, const Eigen::MatrixXd& s0,
                   const Eigen::VectorXd& mu1, const Eigen::MatrixXd& s1) {
    const auto n = mu0.size();
    if (mu1.size() != n || s0.rows() != n || s1.rows() != n)
        throw std::invalid_argument("gaussian_kl dimension mismatch");
    Eigen::LLT<Eigen::MatrixXd> llt1(s1);
    Eigen::LLT<Eigen::MatrixXd> llt0(s0);
    if (llt0.info() != Eigen::Success || llt1.info() != Eigen::Success)
        throw std::invalid_argument("gaussian_kl requires SPD covariances");

    double log_det0 = 0.0, log_det1 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        log_det0 += 2.0 * std::log(llt0.matrixL()(i, i));
        log_det1 += 2.0 * std::log(llt1.matrixL()(i, i));
    }
    const double trace = llt1.solve(s0).trace();
    Eigen::VectorXd d = mu1 - mu0;
    const double quad = d.dot(llt1.solve(d));
    return 0.5 * (trace + quad - static_cast<double>(n) + log_det1 - log_det0);
}

namespace {

struct WalkResult {
    double sum = 0.0;
    long terms = 0;
};

WalkResult walk_divergence(const Domain& d, const PerceptionTable& pt, const World& world,
                           const DivergenceSettings& cfg, std::uint64_t walk_seed) {
    std::mt19937_64 rng(walk_seed);
    std::uniform_int_distribution<std::size_t> pick_action(0, d.action_count() - 1);

    Eigen::Vector2d x = cfg.start ? *cfg.start : world.pose().position;
    const Eigen::MatrixXd sigma_a = world.sigma_a();
    WalkResult r;
    for (int step = 0; step < cfg.walk_length; ++step) {
        StateId s = pt.max_likelihood_state(d, x, kNoState, cfg.argmax, cfg.exact_threshold)
                        .state;
        for (ActionId a = 0; a < d.action_count(); ++a) {
            Eigen::Vector2d mean = world.action_mean(d.action_name(a), x);
            StateId t = d.successor(s, a);
            if (t == kNoState) {
                // No prediction: fall back to staying put, at initialization
                // uncertainty rather than the state's possibly tight one.
                r.sum += gaussian_kl(mean, sigma_a, pt.at(s).mu, pt.p_init_sigma());
            } else {
                const auto& g = pt.at(t);
                r.sum += gaussian_kl(mean, sigma_a, g.mu, g.sigma);
            }
            r.terms += 1;
        }
        x = world.action_mean(d.action_name(static_cast<ActionId>(pick_action(rng))), x);
    }
    return r;
}

}  // namespace

DivergenceEstimate estimate_divergence_serial(const Domain& d, const PerceptionTable& pt,
                                              const World& world,
                                              const DivergenceSettings& cfg) {
    if (cfg.walks < 1) throw std::invalid_argument("divergence estimate needs >= 1 walk");
    if (d.size() == 0) throw std::invalid_argument("divergence estimate over empty state set");
    double total = 0.0;
    long terms = 0;
    for (int k = 0; k < cfg.walks; ++k) {
        WalkResult r = walk_divergence(d, pt, world, cfg, derive_seed(cfg.seed, k));
        total += r.sum;
        terms += r.terms;
    }
    return {terms > 0 ? total / terms : 0.0, cfg.walks, cfg.walk_length, cfg.seed, terms};
}

DivergenceEstimate estimate_divergence(const Domain& d, const PerceptionTable& pt,
                                       const World& world, const DivergenceSettings& cfg) {
    if (cfg.walks < 1) throw std::invalid_argument("divergence estimate needs >= 1 walk");
    if (d.size() == 0) throw std::invalid_argument("divergence estimate over empty state set");
    std::vector<WalkResult> per_walk(cfg.walks);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int k = 0; k < cfg.walks; ++k)
        per_walk[k] = walk_divergence(d, pt, world, cfg, derive_seed(cfg.seed, k));
    double total = 0.0;
    long terms = 0;
    for (const WalkResult& r : per_walk) {  // fixed summation order
        total += r.sum;
        terms += r.terms;
    }
    return {terms > 0 ? total / terms : 0.0, cfg.walks, cfg.walk_length, cfg.seed, terms};
}

double percent_learned(const DivergenceEstimate& initial, const DivergenceEstimate& final_est) {
    if (initial.value <= 0.0)
        throw std::invalid_argument("percent_learned is undefined for zero initial divergence");
    return (initial.value - final_est.value) / initial.value;
}

}  // namespace pal
