#include <doctest.h>

#include <random>

#include "pal/fixtures.hpp"
#include "pal/perception.hpp"

using namespace pal;

namespace {

PerceptionTable single_state_table(Eigen::Vector2d mu, Eigen::Matrix2d sigma) {
    PerceptionTable pt(2, 0.1 * Eigen::Matrix2d::Identity());
    pt.set(0, std::move(mu), std::move(sigma));
    return pt;
}

/// 5x5 grid of well-separated unit-spaced Gaussians (std 0.1 per axis).
struct GridSetup {
    Domain d;
    PerceptionTable pt;
};

GridSetup separated_grid() {
    StateVarSchema schema;
    std::vector<std::string> five{"1", "2", "3", "4", "5"};
    schema.add_variable("x", five);
    schema.add_variable("y", five);
    Domain d(std::move(schema), {"n", "s", "e", "w"});
    PerceptionTable pt(2, 0.1 * Eigen::Matrix2d::Identity());
    for (std::uint32_t j = 0; j < 5; ++j)
        for (std::uint32_t i = 0; i < 5; ++i) {
            StateId s = d.intern({i, j});
            pt.set(s, Eigen::Vector2d(i + 0.5, j + 0.5), 0.01 * Eigen::Matrix2d::Identity());
        }
    // Grid-neighbor gamma edges give the greedy search a useful frontier.
    const int dxs[] = {0, 0, 1, -1};
    const int dys[] = {1, -1, 0, 0};
    for (std::uint32_t j = 0; j < 5; ++j)
        for (std::uint32_t i = 0; i < 5; ++i)
            for (ActionId a = 0; a < 4; ++a) {
                int ni = static_cast<int>(i) + dxs[a], nj = static_cast<int>(j) + dys[a];
                if (ni >= 0 && ni < 5 && nj >= 0 && nj < 5)
                    d.set_successor(*d.find({i, j}), a,
                                    *d.find({static_cast<std::uint32_t>(ni),
                                             static_cast<std::uint32_t>(nj)}));
            }
    return {std::move(d), std::move(pt)};
}

}  // namespace

TEST_SUITE("perception") {

TEST_CASE("likelihood at the mean equals the closed-form peak") {
    auto pt = single_state_table({0.5, 0.5}, 0.1 * Eigen::Matrix2d::Identity());
    CHECK(pt.likelihood(Eigen::Vector2d(0.5, 0.5), 0) ==
          doctest::Approx(1.0 / (2.0 * M_PI * 0.1)).epsilon(1e-9));

    auto unit = single_state_table({0.5, 0.5}, Eigen::Matrix2d::Identity());
    CHECK(unit.likelihood(Eigen::Vector2d(0.5, 0.5), 0) ==
          doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-9));
}

TEST_CASE("likelihood is translation invariant") {
    auto pt = single_state_table({0.25, -1.0}, 0.3 * Eigen::Matrix2d::Identity());
    auto shifted = single_state_table({10.25, 9.0}, 0.3 * Eigen::Matrix2d::Identity());
    CHECK(pt.likelihood(Eigen::Vector2d(0.5, -0.5), 0) ==
          doctest::Approx(shifted.likelihood(Eigen::Vector2d(10.5, 9.5), 0)).epsilon(1e-12));
}

TEST_CASE("dimension mismatches are rejected") {
    auto pt = single_state_table({0.0, 0.0}, Eigen::Matrix2d::Identity());
    Eigen::VectorXd bad(3);
    bad << 0, 0, 0;
    CHECK_THROWS_AS(pt.likelihood(bad, 0), std::invalid_argument);
}

TEST_CASE("density integrates to one on a grid") {
    auto pt = single_state_table({0.5, 0.5}, 0.1 * Eigen::Matrix2d::Identity());
    const double h = 0.01;
    double total = 0.0;
    for (double x = -3.0; x < 4.0; x += h)
        for (double y = -3.0; y < 4.0; y += h)
            total += pt.likelihood(Eigen::Vector2d(x + h / 2, y + h / 2), 0) * h * h;
    CHECK(total == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("max_p_init matches the peak-density formula and scaling law") {
    PerceptionTable a(2, 0.1 * Eigen::Matrix2d::Identity());
    CHECK(a.max_p_init() == doctest::Approx(1.0 / (2.0 * M_PI * 0.1)).epsilon(1e-9));
    PerceptionTable b(2, Eigen::Matrix2d::Identity());
    CHECK(b.max_p_init() == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-9));
    // Scaling sigma by c scales the peak by c^(-n/2); c=10, n=2.
    CHECK(a.max_p_init() == doctest::Approx(10.0 * b.max_p_init()).epsilon(1e-9));
}

TEST_CASE("init_seeded places the peak at the seed with count 1") {
    PerceptionTable pt(2, 0.1 * Eigen::Matrix2d::Identity());
    pt.init_seeded(0, Eigen::Vector2d(2.5, 0.5));
    CHECK(pt.at(0).mu == Eigen::Vector2d(2.5, 0.5));
    CHECK(pt.at(0).sigma == 0.1 * Eigen::Matrix2d::Identity());
    CHECK(pt.at(0).count == 1);
    CHECK(pt.likelihood(Eigen::Vector2d(2.5, 0.5), 0) == doctest::Approx(pt.max_p_init()));
}

TEST_CASE("beta=1 update is a bitwise fixed point") {
    PerceptionTable pt(2, 0.1 * Eigen::Matrix2d::Identity());
    pt.init_seeded(0, Eigen::Vector2d(1.0, 2.0));
    Eigen::VectorXd mu = pt.at(0).mu;
    Eigen::MatrixXd sigma = pt.at(0).sigma;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 0.5);
    for (int i = 0; i < 20; ++i) {
        pt.update(0, Eigen::Vector2d(1.0 + noise(rng), 2.0 + noise(rng)), 1.0);
        CHECK(std::memcmp(pt.at(0).mu.data(), mu.data(), 2 * sizeof(double)) == 0);
        CHECK(std::memcmp(pt.at(0).sigma.data(), sigma.data(), 4 * sizeof(double)) == 0);
    }
    CHECK(pt.at(0).count == 21);
}

TEST_CASE("beta=0 first observation replaces the displaced prior mean") {
    PerceptionTable pt(2, 0.1 * Eigen::Matrix2d::Identity());
    pt.init_displaced(0, Eigen::Vector2d(9.0, 9.0));  // count 0: no observation yet
    pt.update(0, Eigen::Vector2d(1.25, -0.5), 0.0);
    CHECK(pt.at(0).mu(0) == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(pt.at(0).mu(1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(pt.at(0).count == 1);
}

TEST_CASE("beta=0 streaming equals the batch MLE") {
    // 100 random streams up to 10^4 observations: streaming mean within
    // 1e-9 of the batch sample mean, diagonal covariance within 1e-6
    // relative (floored below by sigma_floor).
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> len(2, 10000);
    std::uniform_real_distribution<double> center(-5.0, 5.0);
    std::uniform_real_distribution<double> spread(0.1, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = len(rng);
        const Eigen::Vector2d c(center(rng), center(rng));
        std::normal_distribution<double> nx(c.x(), spread(rng));
        std::normal_distribution<double> ny(c.y(), spread(rng));

        PerceptionTable pt(2, 0.1 * Eigen::Matrix2d::Identity(), 1e-9);
        std::vector<Eigen::Vector2d> xs;
        xs.reserve(n);
        for (int i = 0; i < n; ++i) xs.emplace_back(nx(rng), ny(rng));

        pt.init_seeded(0, xs[0]);
        for (int i = 1; i < n; ++i) pt.update(0, xs[i], 0.0);

        Eigen::Vector2d mean = Eigen::Vector2d::Zero();
        for (const auto& x : xs) mean += x;
        mean /= n;
        Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
        for (const auto& x : xs) cov += (x - mean) * (x - mean).transpose();
        cov /= n;

        CHECK((pt.at(0).mu - mean).cwiseAbs().maxCoeff() < 1e-9);
        for (int k = 0; k < 2; ++k)
            CHECK(std::abs(pt.at(0).sigma(k, k) - cov(k, k)) < 1e-6 * cov(k, k));
    }
}

TEST_CASE("updates preserve the SPD floor") {
    PerceptionTable pt(2, 0.1 * Eigen::Matrix2d::Identity(), 1e-6);
    pt.init_seeded(0, Eigen::Vector2d(0.5, 0.5));
    // Repeated identical observations would collapse the MLE covariance.
    for (int i = 0; i < 50; ++i) pt.update(0, Eigen::Vector2d(0.5, 0.5), 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pt.at(0).sigma);
    CHECK(es.eigenvalues().minCoeff() >= 1e-6 * (1 - 1e-12));
}

TEST_CASE("beta outside [0,1] is rejected") {
    PerceptionTable pt(2, 0.1 * Eigen::Matrix2d::Identity());
    pt.init_seeded(0, Eigen::Vector2d(0, 0));
    CHECK_THROWS_AS(pt.update(0, Eigen::Vector2d(0, 0), 1.5), std::invalid_argument);
    CHECK_THROWS_AS(pt.update(0, Eigen::Vector2d(0, 0), -0.1), std::invalid_argument);
}

TEST_CASE("exhaustive argmax identifies the nearest separated state") {
    auto g = separated_grid();
    auto r = g.pt.argmax_exhaustive_serial(g.d, Eigen::Vector2d(2.5, 3.5));
    CHECK(r.state == *g.d.find({2, 3}));
    CHECK(r.likelihood == doctest::Approx(g.pt.likelihood(Eigen::Vector2d(2.5, 3.5), r.state)));
}

TEST_CASE("greedy argmax equals exhaustive on well-separated configurations") {
    auto g = separated_grid();
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::uint32_t> cell(0, 4);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    std::uniform_int_distribution<StateId> start(0, static_cast<StateId>(g.d.size() - 1));
    for (int q = 0; q < 100; ++q) {
        Eigen::Vector2d x(cell(rng) + 0.5 + jitter(rng), cell(rng) + 0.5 + jitter(rng));
        auto exact = g.pt.argmax_exhaustive_serial(g.d, x);
        auto greedy = g.pt.argmax_greedy(g.d, x, start(rng));
        CHECK(greedy.state == exact.state);
        CHECK(greedy.likelihood == doctest::Approx(exact.likelihood).epsilon(1e-12));
    }
}

TEST_CASE("parallel exhaustive argmax matches the serial reference") {
    auto g = separated_grid();
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> coord(0.0, 5.0);
    for (int q = 0; q < 50; ++q) {
        Eigen::Vector2d x(coord(rng), coord(rng));
        auto serial = g.pt.argmax_exhaustive_serial(g.d, x);
        auto parallel = g.pt.argmax_exhaustive_parallel(g.d, x);
        CHECK(serial.state == parallel.state);
        CHECK(serial.likelihood == parallel.likelihood);
    }
}

TEST_CASE("argmax ties break toward the lexicographically smaller assignment") {
    StateVarSchema schema;
    schema.add_variable("v", {"1", "2"});
    Domain d(std::move(schema), {"a"});
    StateId s0 = d.intern({0});
    d.intern({1});
    PerceptionTable pt(2, 0.1 * Eigen::Matrix2d::Identity());
    // Identical perceptions: both states score the same everywhere.
    pt.set(0, Eigen::Vector2d(0.5, 0.5), 0.1 * Eigen::Matrix2d::Identity());
    pt.set(1, Eigen::Vector2d(0.5, 0.5), 0.1 * Eigen::Matrix2d::Identity());
    auto r = pt.argmax_exhaustive_serial(d, Eigen::Vector2d(0.4, 0.6));
    CHECK(r.state == s0);
}

TEST_CASE("restore reinstates serialized parameters verbatim") {
    PerceptionTable pt(2, 0.1 * Eigen::Matrix2d::Identity(), 1e-6);
    pt.init_seeded(0, Eigen::Vector2d(1.0, 2.0));
    pt.update(0, Eigen::Vector2d(1.5, 2.5), 0.3);
    const auto& orig = pt.at(0);

    PerceptionTable copy(2, 0.1 * Eigen::Matrix2d::Identity(), 1e-6);
    copy.restore(0, orig.mu, orig.sigma, orig.count, orig.ml_mean, orig.ml_m2);
    CHECK(copy.at(0).mu == orig.mu);
    CHECK(copy.at(0).sigma == orig.sigma);
    CHECK(copy.at(0).count == orig.count);
    CHECK(copy.at(0).ml_mean == orig.ml_mean);
    CHECK(copy.at(0).ml_m2 == orig.ml_m2);
}

}
