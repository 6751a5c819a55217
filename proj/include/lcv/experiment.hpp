/* experiment.hpp -- the incremental main loop tying everything together,
 * plus strategy-mix sweeps. */

#ifndef LCV_EXPERIMENT_HPP
#define LCV_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "lcv/config.hpp"
#include "lcv/consistency.hpp"
#include "lcv/evaluation.hpp"
#include "lcv/hypothesis.hpp"
#include "lcv/ledger.hpp"
#include "lcv/sampler.hpp"
#include "lcv/world.hpp"

namespace lcv {

/* Full in-memory state of a finished run. */
struct RunState {
    WorldModel world;
    std::vector<Pose2> odometry;
    ConstraintLedger ledger;
    HypothesisEngine engine;
    ConsistencyMatrix consistency;
    std::vector<Pose2> dead_reckoned;
    std::vector<Pose2> corrected;  /* optimized with verified loop edges */
};

struct RunSummary {
    double pr_area = 0.0;
    double precision_at_default = 1.0;
    double recall_at_default = 0.0;
    long n_verified = 0;
    long n_matched = 0;
    double dead_reckon_rmse = 0.0;
    double corrected_rmse = 0.0;
    double guided_success = 0.0;   /* over all guided-vs-uniform draws */
    double uniform_success = 0.0;
};

/* Executes the per-step loop: retrieval -> ingest -> consistency rows ->
 * hypothesis spawn -> consistency column -> K sampling rounds. */
RunState execute_run(const ExperimentConfig& config);

/* execute_run plus the artifact set written into out_dir. */
RunSummary run_experiment(const ExperimentConfig& config,
                          const std::string& out_dir);

RunSummary summarize(const RunState& state, const ExperimentConfig& config);

/* Mix spec: "x:y:z" (constraint mix) optionally "@a:b:c" (hypothesis
 * mix). One run per mix with a shared world seed; summary.csv row per
 * mix. Runs execute concurrently when threads > 1. */
void sweep_experiment(const ExperimentConfig& base,
                      const std::vector<std::string>& mixes,
                      const std::string& out_dir, int threads = 1);

}  // namespace lcv

#endif  // LCV_EXPERIMENT_HPP
