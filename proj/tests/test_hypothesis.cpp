#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "lcv/g2o_io.hpp"
#include "lcv/hypothesis.hpp"
#include "lcv/world.hpp"
#include "test_util.hpp"

using namespace lcv;

namespace {

HypothesisEngine make_engine(const WorldModel& world, int window,
                             double scale = 10.0) {
    const Eigen::Matrix3d odom_info = odometry_information(0.02, 0.005);
    return HypothesisEngine(
        window, odom_info, scale * odom_info,
        [&world](int i, int j) {
            return loop_measurement(world, i, j, 0.0, 0.0, world.rng_seed);
        });
}

/* Drives maybe_spawn over the whole course, ingesting retrieval results
 * every step. */
int drive(HypothesisEngine& engine, const WorldModel& world,
          const std::vector<Pose2>& odometry, int T, int n_candidates) {
    ConstraintLedger ledger;
    int spawned = 0;
    for (int t = 1; t < T; ++t) {
        ledger.ingest(t, retrieve(world, t, n_candidates));
        if (engine.maybe_spawn(t, ledger, odometry))
            ++spawned;
    }
    return spawned;
}

}  // namespace

TEST_CASE("one hypothesis per non-empty window") {
    const WorldModel world = generate_course(CourseKind::loop, 2000, 21);
    const auto odometry = sample_odometry(world, 0.0, 0.0, 21);

    /* early windows have no constraints (travel cutoff), later ones all do */
    HypothesisEngine engine = make_engine(world, 10);
    const int spawned = drive(engine, world, odometry, 2000, 10);
    CHECK(engine.count() == spawned);
    CHECK(spawned > 100);
    CHECK(spawned <= 199);  /* at most one per window boundary */
    std::vector<int> window_ids;
    for (const auto& h : engine.hypotheses()) {
        CHECK(h.id == static_cast<int>(window_ids.size()));
        window_ids.push_back(h.window_id);
    }
    for (std::size_t k = 1; k < window_ids.size(); ++k)
        CHECK(window_ids[k] > window_ids[k - 1]);
}

TEST_CASE("no spawn without constraints or off the window boundary") {
    const WorldModel world = generate_course(CourseKind::loop, 400, 22);
    const auto odometry = sample_odometry(world, 0.0, 0.0, 22);
    HypothesisEngine engine = make_engine(world, 10);
    ConstraintLedger ledger;
    for (int t = 1; t < 400; ++t) {
        ledger.ingest(t, retrieve(world, t, 10));  /* always empty: cutoff */
        CHECK_FALSE(engine.maybe_spawn(t, ledger, odometry).has_value());
    }
    CHECK(engine.empty());
}

TEST_CASE("spawn uses the window's best-scored constraint") {
    const WorldModel world = generate_course(CourseKind::loop, 2000, 23);
    const auto odometry = sample_odometry(world, 0.0, 0.0, 23);
    HypothesisEngine engine = make_engine(world, 10);
    ConstraintLedger ledger;
    for (int t = 1; t <= 1500; ++t) {
        ledger.ingest(t, retrieve(world, t, 10));
        const auto id = engine.maybe_spawn(t, ledger, odometry);
        if (!id)
            continue;
        const TrajectoryHypothesis& h = engine.hypothesis(*id);
        const LoopConstraint& seed = ledger.constraint(h.seed_constraint);
        CHECK(seed.time_step > t - 10);
        CHECK(seed.time_step <= t);
        for (const LoopConstraint& c : ledger.constraints())
            if (c.time_step > t - 10 && c.time_step <= t)
                CHECK(c.retrieval_score <= seed.retrieval_score);
        CHECK(static_cast<int>(h.trajectory.size()) == t + 1);
    }
}

TEST_CASE("noise-free odometry and a correct seed reproduce ground truth") {
    const WorldModel world = generate_course(CourseKind::loop, 2000, 24);
    const auto odometry = sample_odometry(world, 0.0, 0.0, 24);
    HypothesisEngine engine = make_engine(world, 10);
    ConstraintLedger ledger;
    for (int t = 1; t <= 1200; ++t) {
        ledger.ingest(t, retrieve(world, t, 10));
        const auto id = engine.maybe_spawn(t, ledger, odometry);
        if (!id)
            continue;
        const TrajectoryHypothesis& h = engine.hypothesis(*id);
        const LoopConstraint& seed = ledger.constraint(h.seed_constraint);
        if (!is_revisit_pair(world, seed.query, seed.match))
            continue;
        CHECK(h.converged);
        for (int k = 0; k < static_cast<int>(h.trajectory.size()); k += 50)
            CHECK(test::pose_gap(h.trajectory[k], world.ground_truth[k]) <
                  1e-6);
    }
}

TEST_CASE("position lookup respects trajectory length") {
    TrajectoryHypothesis h;
    h.trajectory = {Pose2(0, 0, 0), Pose2(1, 0, 0), Pose2(2, 0, 0)};
    CHECK(HypothesisEngine::position(h, 0).has_value());
    CHECK(HypothesisEngine::position(h, 2)->x == doctest::Approx(2.0));
    CHECK_FALSE(HypothesisEngine::position(h, 3).has_value());
    CHECK_FALSE(HypothesisEngine::position(h, -1).has_value());
}

TEST_CASE("sampling and importance counters") {
    const WorldModel world = generate_course(CourseKind::loop, 2000, 25);
    const auto odometry = sample_odometry(world, 0.0, 0.0, 25);
    HypothesisEngine engine = make_engine(world, 10);
    ConstraintLedger ledger;
    for (int t = 1; t <= 600; ++t) {
        ledger.ingest(t, retrieve(world, t, 10));
        engine.maybe_spawn(t, ledger, odometry);
    }
    REQUIRE(engine.count() > 0);
    CHECK(engine.hypothesis(0).times_sampled == 0);
    engine.bump_sampled(0);
    engine.bump_sampled(0);
    engine.bump_importance(0);
    CHECK(engine.hypothesis(0).times_sampled == 2);
    CHECK(engine.hypothesis(0).importance_weight == 1);
    engine.set_importance(0, 7);
    CHECK(engine.hypothesis(0).importance_weight == 7);
    CHECK_THROWS(engine.bump_sampled(engine.count()));
}

TEST_CASE("dump writes an index plus one trajectory per hypothesis") {
    const WorldModel world = generate_course(CourseKind::loop, 2000, 26);
    const auto odometry = sample_odometry(world, 0.0, 0.0, 26);
    HypothesisEngine engine = make_engine(world, 10);
    ConstraintLedger ledger;
    for (int t = 1; t <= 600; ++t) {
        ledger.ingest(t, retrieve(world, t, 10));
        engine.maybe_spawn(t, ledger, odometry);
    }
    REQUIRE(engine.count() > 0);
    const std::string dir = "hyp_dump_test";
    engine.dump(dir);
    std::ifstream index(dir + "/hypotheses.csv");
    REQUIRE(index.good());
    std::string line;
    std::getline(index, line);
    CHECK(line ==
          "hyp_id,window_id,seed_constraint,times_sampled,importance_weight");
    int rows = 0;
    while (std::getline(index, line))
        ++rows;
    CHECK(rows == engine.count());
    char name[64];
    std::snprintf(name, sizeof(name), "%s/hyp_%05d.g2o", dir.c_str(), 0);
    const PoseGraph g = read_g2o_file(name);
    CHECK(g.poses.size() == engine.hypothesis(0).trajectory.size());
    std::filesystem::remove_all(dir);
}
