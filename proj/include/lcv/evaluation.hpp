/* evaluation.hpp -- precision/recall sweeps, per-window ratios, and the
 * guided-vs-uniform comparison, all pure folds over run artifacts. */

#ifndef LCV_EVALUATION_HPP
#define LCV_EVALUATION_HPP

#include <string>
#include <vector>

#include "lcv/consistency.hpp"
#include "lcv/hypothesis.hpp"
#include "lcv/ledger.hpp"
#include "lcv/world.hpp"

namespace lcv {

struct PRPoint {
    double threshold = 0.0;
    double precision = 1.0;  /* 1.0 when nothing verified, by convention */
    double recall = 0.0;     /* query-location coverage */
    double recall_constraint = 0.0;  /* constraint-level counting */
    long n_verified = 0;
    long n_correct = 0;
};

bool is_correct(const WorldModel& world, const LoopConstraint& c);

/* Re-thresholds the stored oracle scores; no new verification runs.
 * recall = covered revisit-eligible queries / all revisit-eligible
 * queries; the constraint-level counting is reported alongside. */
std::vector<PRPoint> pr_sweep(const WorldModel& world,
                              const ConstraintLedger& ledger,
                              const std::vector<double>& thresholds);

/* Trapezoidal area under the precision-recall points. */
double pr_area(std::vector<PRPoint> points);

struct WindowRatio {
    int window_id = 0;
    StrategyTag strategy = StrategyTag::US;
    long n = 0;
    long n_matched = 0;
    long n_matched_correct = 0;
    double verified_ratio = 0.0;
    double correct_ratio = 0.0;
};

/* Per (time window, strategy) verified/correct fractions over the
 * verifications executed in that window. Empty windows are absent. */
std::vector<WindowRatio> per_window_ratios(const ConstraintLedger& ledger,
                                           const WorldModel& world,
                                           int window_size);

struct GuidedVsUniformRow {
    double rmse_lo = 0.0;
    double rmse_hi = 0.0;
    long n_hypotheses = 0;
    long guided_draws = 0;
    long guided_hits = 0;
    long uniform_draws = 0;
    long uniform_hits = 0;
    double guided_success = 0.0;
    double uniform_success = 0.0;
};

/* For each trajectory-error bucket, the fraction of TS-guided draws that
 * hit correct constraints next to the uniform baseline. Hypotheses with
 * an empty consistent pool fall back to uniform draws. */
std::vector<GuidedVsUniformRow> guided_vs_uniform_trial(
    const WorldModel& world, const std::vector<LoopConstraint>& constraints,
    const std::vector<TrajectoryHypothesis>& hypotheses,
    const std::vector<double>& bucket_edges, int rounds_per_hypothesis,
    uint64_t seed, double distance_threshold);

/* RMSE of planar position against ground truth over the overlap. */
double trajectory_rmse(const std::vector<Pose2>& trajectory,
                       const std::vector<Pose2>& ground_truth);

void write_pr_csv(const std::string& path, const std::vector<PRPoint>& pts);
void write_window_csv(const std::string& path,
                      const std::vector<WindowRatio>& rows);
void write_guided_vs_uniform_csv(const std::string& path,
                                 const std::vector<GuidedVsUniformRow>& rows);

}  // namespace lcv

#endif  // LCV_EVALUATION_HPP
