#include "lcv/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lcv/g2o_io.hpp"
#include "lcv/rng.hpp"

namespace lcv {

namespace {

/* sub-seed purposes derived from the single run seed */
constexpr uint64_t kSeedWorld = 1;
constexpr uint64_t kSeedOdometry = 2;
constexpr uint64_t kSeedOracle = 3;
constexpr uint64_t kSeedSampler = 4;
constexpr uint64_t kSeedLoopMeas = 5;
constexpr uint64_t kSeedGvu = 6;

const std::vector<double> kRmseBuckets = {0.0, 5.0, 10.0, 20.0, 50.0, 1e9};
constexpr int kGvuRoundsPerHypothesis = 200;

StrategyMix make_mix(const ExperimentConfig& config) {
    StrategyMix mix;
    parse_constraint_mix(config.constraint_mix, mix);
    parse_hypothesis_mix(config.hypothesis_mix, mix);
    return mix;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

RunState execute_run(const ExperimentConfig& config) {
    WorldModel world = generate_course(parse_course_kind(config.course_kind),
                                       config.course_length,
                                       hash_mix(config.seed, kSeedWorld));
    world.revisit_radius = config.revisit_radius;
    world.triviality_cutoff = config.triviality_cutoff;
    world.score_model = {config.mu_true, config.mu_alias, config.mu_distractor,
                         config.score_sigma};

    std::vector<Pose2> odometry = sample_odometry(
        world, config.sigma_xy, config.sigma_theta,
        hash_mix(config.seed, kSeedOdometry));

    const Eigen::Matrix3d odom_info =
        odometry_information(config.sigma_xy, config.sigma_theta);
    const Eigen::Matrix3d loop_info = config.loop_info_scale * odom_info;
    const uint64_t loop_meas_seed = hash_mix(config.seed, kSeedLoopMeas);
    const OracleConfig oracle_config{config.p_true_accept,
                                     config.p_false_accept,
                                     config.score_noise_sigma};
    const uint64_t oracle_seed = hash_mix(config.seed, kSeedOracle);

    HypothesisEngine engine(
        config.window, odom_info, loop_info,
        [&world, &config, loop_meas_seed](int i, int j) {
            return loop_measurement(world, i, j, config.sigma_xy,
                                    config.sigma_theta, loop_meas_seed);
        });
    ConstraintLedger ledger;
    ConsistencyMatrix consistency(config.consistency_threshold);
    GuidedSampler sampler(make_mix(config),
                          hash_mix(config.seed, kSeedSampler));
    const auto oracle = [&world, &oracle_config, oracle_seed](int i, int j) {
        return verify_oracle(world, oracle_config, i, j, oracle_seed);
    };

    const int total = world.size();
    for (int t = 1; t < total; ++t) {
        const auto candidates = retrieve(world, t, config.n_candidates);
        const auto new_ids = ledger.ingest(t, candidates);
        for (int id : new_ids)
            consistency.add_constraint_row(ledger.constraint(id),
                                           engine.hypotheses());
        sampler.notify_ingested(new_ids);

        if (const auto hyp_id = engine.maybe_spawn(t, ledger, odometry)) {
            consistency.add_hypothesis_column(engine.hypothesis(*hyp_id),
                                              ledger.constraints());
            long weight = 0;
            for (int cid : sampler.verified_matched_ids())
                if (consistency.get(cid, *hyp_id))
                    ++weight;
            engine.set_importance(*hyp_id, weight);
        }

        for (int k = 0; k < config.k_per_step; ++k)
            sampler.sampling_round(engine, ledger, consistency, oracle,
                                   config.verify_threshold, t);
    }

    /* final corrected trajectory from all verified-matched loop edges */
    PoseGraph graph = make_chain_graph(odometry, odom_info);
    for (int cid : ledger.verified_matched(config.verify_threshold)) {
        const LoopConstraint& c = ledger.constraint(cid);
        Edge e;
        e.from = c.match;
        e.to = c.query;
        e.measurement = loop_measurement(world, c.query, c.match,
                                         config.sigma_xy, config.sigma_theta,
                                         loop_meas_seed);
        e.information = loop_info;
        graph.loop_edges.push_back(e);
    }
    std::vector<Pose2> dead_reckoned = graph.poses;
    auto [optimized, report] = optimize(graph);
    std::vector<Pose2> corrected =
        report.converged ? std::move(optimized.poses) : dead_reckoned;

    return RunState{std::move(world),         std::move(odometry),
                    std::move(ledger),        std::move(engine),
                    std::move(consistency),   std::move(dead_reckoned),
                    std::move(corrected)};
}

RunSummary summarize(const RunState& state, const ExperimentConfig& config) {
    RunSummary s;
    const auto points = pr_sweep(state.world, state.ledger, config.thresholds);
    s.pr_area = pr_area(points);
    const auto at_default =
        pr_sweep(state.world, state.ledger, {config.verify_threshold});
    s.precision_at_default = at_default[0].precision;
    s.recall_at_default = at_default[0].recall;
    s.n_verified = static_cast<long>(state.ledger.records().size());
    s.n_matched = static_cast<long>(
        state.ledger.verified_matched(config.verify_threshold).size());
    s.dead_reckon_rmse =
        trajectory_rmse(state.dead_reckoned, state.world.ground_truth);
    s.corrected_rmse =
        trajectory_rmse(state.corrected, state.world.ground_truth);

    const auto gvu = guided_vs_uniform_trial(
        state.world, state.ledger.constraints(),
        state.engine.hypotheses(), kRmseBuckets, kGvuRoundsPerHypothesis,
        hash_mix(config.seed, kSeedGvu), config.consistency_threshold);
    long gd = 0, gh = 0, ud = 0, uh = 0;
    for (const auto& row : gvu) {
        gd += row.guided_draws;
        gh += row.guided_hits;
        ud += row.uniform_draws;
        uh += row.uniform_hits;
    }
    s.guided_success = gd ? static_cast<double>(gh) / gd : 0.0;
    s.uniform_success = ud ? static_cast<double>(uh) / ud : 0.0;
    return s;
}

RunSummary run_experiment(const ExperimentConfig& config,
                          const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    RunState state = execute_run(config);

    save_config(out_dir + "/config.txt", config);
    state.ledger.dump_csv_file(out_dir + "/ledger.csv");
    state.engine.dump(out_dir + "/hypotheses");
    export_world(out_dir + "/ground_truth.g2o", out_dir + "/candidates.cand",
                 state.world, config.n_candidates);
    {
        std::ofstream out(out_dir + "/dead_reckoning.g2o", std::ios::binary);
        write_trajectory_g2o(out, state.dead_reckoned);
    }
    {
        std::ofstream out(out_dir + "/final_trajectory.g2o",
                          std::ios::binary);
        write_trajectory_g2o(out, state.corrected);
    }
    if (config.dump_consistency) {
        std::ofstream out(out_dir + "/consistency.csv", std::ios::binary);
        state.consistency.dump_triplets(out);
    }

    const auto points = pr_sweep(state.world, state.ledger, config.thresholds);
    write_pr_csv(out_dir + "/pr_curve.csv", points);
    write_window_csv(out_dir + "/window_ratios.csv",
                     per_window_ratios(state.ledger, state.world,
                                       config.window));
    write_guided_vs_uniform_csv(
        out_dir + "/guided_vs_uniform.csv",
        guided_vs_uniform_trial(state.world, state.ledger.constraints(),
                                state.engine.hypotheses(), kRmseBuckets,
                                kGvuRoundsPerHypothesis,
                                hash_mix(config.seed, kSeedGvu),
                                config.consistency_threshold));

    RunSummary summary = summarize(state, config);
    std::ofstream out(out_dir + "/summary.csv", std::ios::binary);
    out << "pr_area,precision,recall,n_verified,n_matched,dead_reckon_rmse,"
           "corrected_rmse,guided_success,uniform_success\n"
        << num(summary.pr_area) << ',' << num(summary.precision_at_default)
        << ',' << num(summary.recall_at_default) << ',' << summary.n_verified
        << ',' << summary.n_matched << ',' << num(summary.dead_reckon_rmse)
        << ',' << num(summary.corrected_rmse) << ','
        << num(summary.guided_success) << ',' << num(summary.uniform_success)
        << '\n';
    return summary;
}

void sweep_experiment(const ExperimentConfig& base,
                      const std::vector<std::string>& mixes,
                      const std::string& out_dir, int threads) {
    if (mixes.empty())
        throw std::invalid_argument("sweep needs at least one mix");
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    std::vector<ExperimentConfig> configs;
    configs.reserve(mixes.size());
    for (const std::string& spec : mixes) {
        ExperimentConfig config = base;
        const auto at = spec.find('@');
        config.constraint_mix = spec.substr(0, at);
        if (at != std::string::npos)
            config.hypothesis_mix = spec.substr(at + 1);
        StrategyMix check;  /* validate before launching runs */
        parse_constraint_mix(config.constraint_mix, check);
        parse_hypothesis_mix(config.hypothesis_mix, check);
        configs.push_back(std::move(config));
    }

    std::vector<RunSummary> summaries(configs.size());
    const int n = static_cast<int>(configs.size());
#ifdef _OPENMP
    omp_set_num_threads(std::max(1, threads));
#endif
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "/mix_%03d", i);
        summaries[i] = run_experiment(configs[i], out_dir + name);
    }

    std::ofstream out(out_dir + "/sweep_summary.csv", std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open sweep summary");
    out << "mix,pr_area,precision,recall,n_matched,guided_success,"
           "uniform_success\n";
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const RunSummary& s = summaries[i];
        out << mixes[i] << ',' << num(s.pr_area) << ','
            << num(s.precision_at_default) << ',' << num(s.recall_at_default)
            << ',' << s.n_matched << ',' << num(s.guided_success) << ','
            << num(s.uniform_success) << '\n';
    }
}

}  // namespace lcv
