#include "pal/perception.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pal {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;

// Total order used for argmax ties: higher likelihood wins, then the
// lexicographically smaller assignment.
bool better(double like, const Assignment& a, double best, const Assignment& best_a) {
    if (like != best) return like > best;
    return assignment_less(a, best_a);
}
}  // namespace

Eigen::MatrixXd spd_floor(const Eigen::MatrixXd& m, double floor) {
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    Eigen::VectorXd ev = es.eigenvalues();
    bool clamped = false;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] < floor) {
            ev[i] = floor;
            clamped = true;
        }
    }
    if (!clamped) return sym;
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

void GaussianPerception::refresh_cache() const {
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("perception covariance is not positive definite");
    const auto n = static_cast<double>(mu.size());
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i)
        log_det += 2.0 * std::log(llt.matrixL()(i, i));
    sigma_inv_ = llt.solve(Eigen::MatrixXd::Identity(mu.size(), mu.size()));
    log_norm_ = -0.5 * (n * kLog2Pi + log_det);
    cache_ok_ = true;
}

double GaussianPerception::log_pdf(const Eigen::VectorXd& x) const {
    if (!cache_ok_) refresh_cache();
    Eigen::VectorXd d = x - mu;
    return log_norm_ - 0.5 * d.dot(sigma_inv_ * d);
}

double GaussianPerception::pdf(const Eigen::VectorXd& x) const {
    return std::exp(log_pdf(x));
}

double GaussianPerception::peak_density() const {
    if (!cache_ok_) refresh_cache();
    return std::exp(log_norm_);
}

PerceptionTable::PerceptionTable(int dim, Eigen::MatrixXd p_init_sigma, double sigma_floor)
    : dim_(dim), p_init_sigma_(std::move(p_init_sigma)), sigma_floor_(sigma_floor) {
    if (dim_ < 1) throw std::invalid_argument("perception dimension must be positive");
    if (p_init_sigma_.rows() != dim_ || p_init_sigma_.cols() != dim_)
        throw std::invalid_argument("p_init_sigma dimension mismatch");
    Eigen::LLT<Eigen::MatrixXd> llt(p_init_sigma_);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("p_init_sigma must be symmetric positive definite");
}

double PerceptionTable::max_p_init() const {
    GaussianPerception g;
    g.mu = Eigen::VectorXd::Zero(dim_);
    g.sigma = p_init_sigma_;
    return g.peak_density();
}

void PerceptionTable::check_dim(const Eigen::VectorXd& x) const {
    if (x.size() != dim_)
        throw std::invalid_argument("perception vector dimension mismatch");
}

GaussianPerception& PerceptionTable::mutable_at(StateId s) {
    auto& g = table_.at(s);
    g.cache_ok_ = false;
    return g;
}

void PerceptionTable::set(StateId s, Eigen::VectorXd mu, Eigen::MatrixXd sigma, long count) {
    check_dim(mu);
    if (table_.size() <= s) table_.resize(s + 1);
    auto& g = table_[s];
    g.mu = std::move(mu);
    g.sigma = spd_floor(sigma, sigma_floor_);
    g.count = count;
    g.ml_mean = g.mu;
    g.ml_m2 = Eigen::MatrixXd::Zero(dim_, dim_);
    g.cache_ok_ = false;
}

void PerceptionTable::restore(StateId s, Eigen::VectorXd mu, Eigen::MatrixXd sigma, long count,
                              Eigen::VectorXd ml_mean, Eigen::MatrixXd ml_m2) {
    check_dim(mu);
    if (table_.size() <= s) table_.resize(s + 1);
    auto& g = table_[s];
    g.mu = std::move(mu);
    g.sigma = std::move(sigma);
    g.count = count;
    g.ml_mean = std::move(ml_mean);
    g.ml_m2 = std::move(ml_m2);
    g.cache_ok_ = false;
}

void PerceptionTable::init_seeded(StateId s, const Eigen::VectorXd& x) {
    set(s, x, p_init_sigma_, 1);
}

void PerceptionTable::init_displaced(StateId s, const Eigen::VectorXd& mu) {
    set(s, mu, p_init_sigma_, 0);
}

double PerceptionTable::likelihood(const Eigen::VectorXd& x, StateId s) const {
    check_dim(x);
    return table_.at(s).pdf(x);
}

void PerceptionTable::update(StateId s, const Eigen::VectorXd& x, double beta) {
    check_dim(x);
    if (beta < 0.0 || beta > 1.0)
        throw std::invalid_argument("beta must lie in [0, 1]");
    auto& g = mutable_at(s);
    const long m = g.count + 1;

    if (g.count == 0) {
        g.ml_mean = x;
        g.ml_m2.setZero(dim_, dim_);
    } else {
        Eigen::VectorXd d = x - g.ml_mean;
        g.ml_mean += d / static_cast<double>(m);
        g.ml_m2 += (d * d.transpose()) * (static_cast<double>(m - 1) / static_cast<double>(m));
    }

    Eigen::VectorXd delta_mu = (x - g.mu) / static_cast<double>(m);
    g.mu = beta * g.mu + (1.0 - beta) * (g.mu + delta_mu);
    Eigen::MatrixXd ml_cov = spd_floor(g.ml_m2 / static_cast<double>(m), sigma_floor_);
    g.sigma = spd_floor(beta * g.sigma + (1.0 - beta) * ml_cov, sigma_floor_);
    g.count = m;
}

ArgmaxResult PerceptionTable::argmax_exhaustive_serial(const Domain& d,
                                                       const Eigen::VectorXd& x) const {
    if (d.size() == 0) throw std::invalid_argument("argmax over empty state set");
    ArgmaxResult r{0, table_.at(0).pdf(x)};
    for (StateId s = 1; s < d.size(); ++s) {
        double like = table_.at(s).pdf(x);
        if (better(like, d.assignment(s), r.likelihood, d.assignment(r.state)))
            r = {s, like};
    }
    return r;
}

ArgmaxResult PerceptionTable::argmax_exhaustive_parallel(const Domain& d,
                                                         const Eigen::VectorXd& x) const {
    if (d.size() == 0) throw std::invalid_argument("argmax over empty state set");
    const auto n = static_cast<long>(d.size());
    ArgmaxResult r{0, table_.at(0).pdf(x)};
#ifdef _OPENMP
#pragma omp parallel
    {
        ArgmaxResult local{0, table_.at(0).pdf(x)};
#pragma omp for nowait schedule(static)
        for (long i = 1; i < n; ++i) {
            auto s = static_cast<StateId>(i);
            double like = table_.at(s).pdf(x);
            if (better(like, d.assignment(s), local.likelihood, d.assignment(local.state)))
                local = {s, like};
        }
#pragma omp critical
        if (better(local.likelihood, d.assignment(local.state), r.likelihood,
                   d.assignment(r.state)))
            r = local;
    }
    return r;
#else
    (void)n;
    return argmax_exhaustive_serial(d, x);
#endif
}

ArgmaxResult PerceptionTable::argmax_greedy(const Domain& d, const Eigen::VectorXd& x,
                                            StateId start) const {
    if (d.size() == 0) throw std::invalid_argument("argmax over empty state set");
    if (start == kNoState || start >= d.size()) start = 0;
    ArgmaxResult cur{start, table_.at(start).pdf(x)};
    const auto& schema = d.schema();
    bool improved = true;
    while (improved) {
        improved = false;
        ArgmaxResult best = cur;
        auto consider = [&](StateId s) {
            if (s == kNoState || s == cur.state) return;
            double like = table_.at(s).pdf(x);
            if (better(like, d.assignment(s), best.likelihood, d.assignment(best.state)))
                best = {s, like};
        };
        for (ActionId a = 0; a < d.action_count(); ++a) consider(d.successor(cur.state, a));
        for (StateId p : d.predecessors(cur.state)) consider(p);
        Assignment probe = d.assignment(cur.state);
        for (std::size_t i = 0; i < schema.variable_count(); ++i) {
            const auto card = schema.variable(i).values.size();
            const auto old = probe[i];
            for (std::uint32_t v = 0; v < card; ++v) {
                if (v == old) continue;
                probe[i] = v;
                if (auto s = d.find(probe)) consider(*s);
            }
            probe[i] = old;
        }
        if (best.state != cur.state &&
            better(best.likelihood, d.assignment(best.state), cur.likelihood,
                   d.assignment(cur.state))) {
            cur = best;
            improved = true;
        }
    }
    return cur;
}

ArgmaxResult PerceptionTable::max_likelihood_state(const Domain& d, const Eigen::VectorXd& x,
                                                   StateId predicted, ArgmaxMode mode,
                                                   std::size_t exact_threshold) const {
    check_dim(x);
    if (mode == ArgmaxMode::Exact || d.size() <= exact_threshold)
        return d.size() >= 2048 ? argmax_exhaustive_parallel(d, x)
                                : argmax_exhaustive_serial(d, x);
    return argmax_greedy(d, x, predicted);
}

}  // namespace pal
