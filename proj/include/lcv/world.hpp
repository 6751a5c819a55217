/* world.hpp -- seeded synthetic world: ground-truth courses, noisy
 * odometry, scored retrieval with planted aliasing, and a deterministic
 * verification oracle. Stands in for a visual SLAM front-end. */

#ifndef LCV_WORLD_HPP
#define LCV_WORLD_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcv/pose2.hpp"

namespace lcv {

enum class CourseKind { loop, figure_eight, campus_multi_loop };

CourseKind parse_course_kind(const std::string& name);
std::string course_kind_name(CourseKind kind);

/* Retrieval score populations. Overlapping by default so ranking errors
 * occur; sigma = 0 separates them completely. */
struct ScoreModel {
    double mu_true = 0.7;
    double mu_alias = 0.5;
    double mu_distractor = 0.3;
    double sigma = 0.15;
};

struct WorldModel {
    std::vector<Pose2> ground_truth;
    std::vector<std::vector<int>> aliasing_clusters;  /* pairwise disjoint */
    double revisit_radius = 10.0;
    double triviality_cutoff = 100.0;  /* min travel distance for a pair */
    uint64_t rng_seed = 0;
    ScoreModel score_model;

    std::vector<double> cum_distance;  /* arc length up to each location */
    std::vector<int> cluster_of;       /* cluster id per location, or -1 */

    int size() const { return static_cast<int>(ground_truth.size()); }
    double travel_distance(int j, int i) const {
        return cum_distance[i] - cum_distance[j];
    }
};

struct RetrievalCandidate {
    int query = 0;
    int match = 0;   /* always < query */
    double score = 0.0;
};

struct OracleConfig {
    double p_true_accept = 0.8;
    double p_false_accept = 0.1;
    double score_noise_sigma = 0.1;
};

/* Deterministic for a fixed seed. Step length is 0.25 m. */
WorldModel generate_course(CourseKind kind, int length, uint64_t seed);

/* u_t = relative(gt_{t-1}, gt_t) composed with a Gaussian perturbation;
 * sigma = 0 reproduces the exact relative transforms. */
std::vector<Pose2> sample_odometry(const WorldModel& world, double sigma_xy,
                                   double sigma_theta, uint64_t seed);

/* Top-scored past locations for a query, travel-distance cutoff applied.
 * True matches, aliased locations and distractors draw from the three
 * score populations; result sorted by descending score. */
std::vector<RetrievalCandidate> retrieve(const WorldModel& world, int query,
                                         int n_candidates);

/* Verification score in [0, 1], deterministic per (seed, i, j). Mass
 * above 0.5 equals p_true_accept for ground-truth-correct pairs and
 * p_false_accept otherwise. */
double verify_oracle(const WorldModel& world, const OracleConfig& config,
                     int i, int j, uint64_t seed);

/* Maximal contiguous index ranges [begin, end] of past locations within
 * revisit_radius of the query, pairs under the travel cutoff excluded. */
std::vector<std::pair<int, int>> ground_truth_ranges(const WorldModel& world,
                                                     int query);

/* True iff (i, j) is a ground-truth-correct loop closure (j < i within
 * revisit_radius and travel distance above the cutoff). */
bool is_revisit_pair(const WorldModel& world, int i, int j);

/* Relative-pose measurement the front-end would attach to a verified
 * pair: near the true relative transform for correct pairs, identity
 * (the aliased claim "same place") for incorrect ones. */
Pose2 loop_measurement(const WorldModel& world, int i, int j,
                       double sigma_xy, double sigma_theta, uint64_t seed);

/* Export: ground truth as g2o vertices plus `CAND query match score`
 * lines for the top-n retrieval candidates of every query. */
void export_world(const std::string& gt_path, const std::string& cand_path,
                  const WorldModel& world, int n_candidates);

}  // namespace lcv

#endif  // LCV_WORLD_HPP
