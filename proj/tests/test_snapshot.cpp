#include <doctest.h>

#include <cstdio>

#include "pal/fixtures.hpp"
#include "pal/pal.hpp"
#include "pal/snapshot.hpp"

using namespace pal;

namespace {

/// A model with non-trivial learned statistics: run the four-room fixture
/// for a while so means, covariances, and MLE accumulators are all dirty.
Session learned_session() {
    Session s = fixtures::two_room_session();
    RunConfig cfg;
    cfg.learn.alpha = 0.0;
    cfg.learn.beta = 0.3;
    cfg.learn.epsilon = 0.5;
    cfg.max_steps = 60;
    cfg.seed = 5;
    run(s, {fixtures::two_room_goal(s)}, cfg);
    return s;
}

}  // namespace

TEST_SUITE("snapshot") {

TEST_CASE("model snapshots round-trip value-exactly") {
    Session s = learned_session();
    std::string text = save_model(s.domain, s.perceptions);
    ModelSnapshot loaded = load_model(text);

    REQUIRE(loaded.domain.size() == s.domain.size());
    CHECK(loaded.domain.schema().variable_count() == s.domain.schema().variable_count());
    CHECK(loaded.domain.action_count() == s.domain.action_count());
    for (StateId st = 0; st < s.domain.size(); ++st) {
        CHECK(loaded.domain.assignment(st) == s.domain.assignment(st));
        for (ActionId a = 0; a < s.domain.action_count(); ++a)
            CHECK(loaded.domain.successor(st, a) == s.domain.successor(st, a));

        const auto& orig = s.perceptions.at(st);
        const auto& copy = loaded.perceptions.at(st);
        CHECK(copy.count == orig.count);
        CHECK(copy.mu == orig.mu);        // exact doubles, not approximate
        CHECK(copy.sigma == orig.sigma);
        CHECK(copy.ml_mean == orig.ml_mean);
        CHECK(copy.ml_m2 == orig.ml_m2);
    }
    CHECK(loaded.perceptions.p_init_sigma() == s.perceptions.p_init_sigma());
    CHECK(loaded.perceptions.sigma_floor() == s.perceptions.sigma_floor());

    // Serializing the reloaded model reproduces the text byte for byte.
    CHECK(save_model(loaded.domain, loaded.perceptions) == text);
}

TEST_CASE("model snapshot files round-trip") {
    Session s = learned_session();
    const std::string path = "/tmp/pal_test_model.json";
    save_model_file(s.domain, s.perceptions, path);
    ModelSnapshot loaded = load_model_file(path);
    CHECK(save_model(loaded.domain, loaded.perceptions) == save_model(s.domain, s.perceptions));
    std::remove(path.c_str());
}

TEST_CASE("a reloaded model continues a run identically") {
    // Snapshot mid-experiment, reload, and verify likelihood queries agree
    // bit for bit: resume-from-snapshot cannot drift.
    Session s = learned_session();
    ModelSnapshot loaded = load_model(save_model(s.domain, s.perceptions));
    for (double x = 0.1; x < 3.0; x += 0.37)
        for (double y = 0.1; y < 2.0; y += 0.41) {
            Eigen::Vector2d p(x, y);
            auto a = s.perceptions.argmax_exhaustive_serial(s.domain, p);
            auto b = loaded.perceptions.argmax_exhaustive_serial(loaded.domain, p);
            CHECK(a.state == b.state);
            CHECK(a.likelihood == b.likelihood);
        }
}

TEST_CASE("corrupt snapshots are rejected") {
    CHECK_THROWS(load_model("not json at all"));
    CHECK_THROWS(load_model("{\"format\":\"something-else\"}"));
}

}
