/* Compares the OpenMP consistency kernels against the serial reference. */

#include <benchmark/benchmark.h>

#include "lcv/consistency.hpp"
#include "lcv/rng.hpp"

namespace {

struct Fixture {
    std::vector<lcv::LoopConstraint> constraints;
    std::vector<lcv::TrajectoryHypothesis> hypotheses;
};

Fixture make_fixture(int n_constraints, int n_hypotheses, int traj_len) {
    Fixture f;
    lcv::Rng rng(42);
    for (int i = 0; i < n_constraints; ++i) {
        lcv::LoopConstraint c;
        c.id = i;
        c.query = 1 + static_cast<int>(rng.below(traj_len - 1));
        c.match = static_cast<int>(rng.below(c.query));
        f.constraints.push_back(c);
    }
    for (int j = 0; j < n_hypotheses; ++j) {
        lcv::TrajectoryHypothesis h;
        h.id = j;
        h.trajectory.reserve(traj_len);
        lcv::Pose2 p;
        for (int t = 0; t < traj_len; ++t) {
            p = lcv::compose(p, lcv::Pose2(0.25, 0.0, rng.gaussian() * 0.05));
            h.trajectory.push_back(p);
        }
        f.hypotheses.push_back(std::move(h));
    }
    return f;
}

void BM_batch_rebuild_serial(benchmark::State& state) {
    const auto f = make_fixture(static_cast<int>(state.range(0)),
                                static_cast<int>(state.range(1)), 2000);
    for (auto _ : state) {
        auto m = lcv::ConsistencyMatrix::batch_rebuild_serial(
            f.constraints, f.hypotheses, 10.0);
        benchmark::DoNotOptimize(m);
    }
}

void BM_batch_rebuild_parallel(benchmark::State& state) {
    const auto f = make_fixture(static_cast<int>(state.range(0)),
                                static_cast<int>(state.range(1)), 2000);
    for (auto _ : state) {
        auto m = lcv::ConsistencyMatrix::batch_rebuild(f.constraints,
                                                       f.hypotheses, 10.0);
        benchmark::DoNotOptimize(m);
    }
}

void BM_column_add_serial(benchmark::State& state) {
    const auto f = make_fixture(static_cast<int>(state.range(0)), 1, 2000);
    for (auto _ : state) {
        lcv::ConsistencyMatrix m(10.0);
        for (const auto& c : f.constraints)
            m.add_constraint_row(c, {});
        m.add_hypothesis_column_serial(f.hypotheses[0], f.constraints);
        benchmark::DoNotOptimize(m);
    }
}

void BM_column_add_parallel(benchmark::State& state) {
    const auto f = make_fixture(static_cast<int>(state.range(0)), 1, 2000);
    for (auto _ : state) {
        lcv::ConsistencyMatrix m(10.0);
        for (const auto& c : f.constraints)
            m.add_constraint_row(c, {});
        m.add_hypothesis_column(f.hypotheses[0], f.constraints);
        benchmark::DoNotOptimize(m);
    }
}

}  // namespace

BENCHMARK(BM_batch_rebuild_serial)->Args({20000, 100});
BENCHMARK(BM_batch_rebuild_parallel)->Args({20000, 100});
BENCHMARK(BM_column_add_serial)->Arg(100000);
BENCHMARK(BM_column_add_parallel)->Arg(100000);

BENCHMARK_MAIN();
