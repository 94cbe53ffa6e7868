#pragma once

#include <Eigen/Dense>

#include "pal/domain.hpp"

namespace pal {

/// Per-state multivariate Gaussian perception f(x, s) = N(x; mu, sigma).
///
/// Alongside the blended (mu, sigma) actually used for likelihoods, the
/// struct carries running maximum-likelihood statistics over the state's
/// observation stream (Welford mean and scatter). The blended parameters
/// are a convex combination, weighted by beta, of the previous parameters
/// and the batch MLE over all observations of the state.
struct GaussianPerception {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    long count = 0;  // |Obs(s)|

    Eigen::VectorXd ml_mean;
    Eigen::MatrixXd ml_m2;  // sum of squared deviations; MLE cov = ml_m2 / count

    double log_pdf(const Eigen::VectorXd& x) const;
    double pdf(const Eigen::VectorXd& x) const;

    /// Density at the mean: ((2 pi)^n det(sigma))^(-1/2).
    double peak_density() const;

private:
    void refresh_cache() const;
    mutable bool cache_ok_ = false;
    mutable Eigen::MatrixXd sigma_inv_;
    mutable double log_norm_ = 0.0;
    friend class PerceptionTable;
};

/// Clamps the eigenvalues of a symmetric matrix to at least `floor`.
Eigen::MatrixXd spd_floor(const Eigen::MatrixXd& m, double floor);

enum class ArgmaxMode { Exact, Greedy };

struct ArgmaxResult {
    StateId state = kNoState;
    double likelihood = 0.0;
};

/// One Gaussian perception per state, indexed by StateId.
class PerceptionTable {
public:
    PerceptionTable(int dim, Eigen::MatrixXd p_init_sigma, double sigma_floor = 1e-6);

    int dim() const { return dim_; }
    double sigma_floor() const { return sigma_floor_; }
    const Eigen::MatrixXd& p_init_sigma() const { return p_init_sigma_; }

    /// Peak density of a fresh p_init Gaussian; the state-creation
    /// threshold is (1 - epsilon) times this value.
    double max_p_init() const;

    std::size_t size() const { return table_.size(); }
    const GaussianPerception& at(StateId s) const { return table_.at(s); }

    /// Registers state s with explicit parameters (fixture construction).
    void set(StateId s, Eigen::VectorXd mu, Eigen::MatrixXd sigma, long count = 0);

    /// Verbatim reinstatement of a serialized perception; no flooring, so
    /// a snapshot round trip is value-exact.
    void restore(StateId s, Eigen::VectorXd mu, Eigen::MatrixXd sigma, long count,
                 Eigen::VectorXd ml_mean, Eigen::MatrixXd ml_m2);

    /// p_init seeded at an observation: mu = x, sigma = p_init_sigma, count = 1.
    void init_seeded(StateId s, const Eigen::VectorXd& x);

    /// p_init for a sibling of a newly created state: displaced mean, no
    /// observation consumed.
    void init_displaced(StateId s, const Eigen::VectorXd& mu);

    double likelihood(const Eigen::VectorXd& x, StateId s) const;

    /// Incremental beta-weighted update with a new observation of s.
    /// The MLE divisor is |Obs(s)| counting the new observation.
    void update(StateId s, const Eigen::VectorXd& x, double beta);

    /// argmax_s f(x, s). Exact mode scans every state (OpenMP when the
    /// state set is large); greedy mode hill-climbs from `predicted` over
    /// gamma neighbors plus one-variable-different states. Ties break by
    /// lexicographic assignment order.
    ArgmaxResult max_likelihood_state(const Domain& d, const Eigen::VectorXd& x,
                                      StateId predicted, ArgmaxMode mode,
                                      std::size_t exact_threshold = 4096) const;

    /// Serial exhaustive scan, kept as the reference implementation.
    ArgmaxResult argmax_exhaustive_serial(const Domain& d, const Eigen::VectorXd& x) const;
    /// OpenMP exhaustive scan; identical result to the serial reference.
    ArgmaxResult argmax_exhaustive_parallel(const Domain& d, const Eigen::VectorXd& x) const;
    ArgmaxResult argmax_greedy(const Domain& d, const Eigen::VectorXd& x, StateId start) const;

private:
    void check_dim(const Eigen::VectorXd& x) const;
    GaussianPerception& mutable_at(StateId s);

    int dim_;
    Eigen::MatrixXd p_init_sigma_;
    double sigma_floor_;
    std::vector<GaussianPerception> table_;
};

}  // namespace pal
