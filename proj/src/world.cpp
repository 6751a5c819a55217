#include "lcv/world.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "lcv/g2o_io.hpp"
#include "lcv/rng.hpp"

namespace lcv {

namespace {

constexpr double kStepLength = 0.25;

/* stream tags keeping the draw purposes independent */
constexpr uint64_t kStreamClusters = 0x11;
constexpr uint64_t kStreamOdometry = 0x22;
constexpr uint64_t kStreamRetrieval = 0x33;
constexpr uint64_t kStreamOracle = 0x44;
constexpr uint64_t kStreamLoopMeas = 0x55;

Pose2 circle_pose(double radius, double phase) {
    return Pose2(radius * std::sin(phase), radius * (1.0 - std::cos(phase)),
                 phase);
}

std::vector<Pose2> make_trajectory(CourseKind kind, int length) {
    std::vector<Pose2> gt;
    gt.reserve(length);
    switch (kind) {
        case CourseKind::loop: {
            /* one circle traversed twice */
            const double period = length / 2.0;
            const double radius = period * kStepLength / (2.0 * kPi);
            for (int t = 0; t < length; ++t)
                gt.push_back(circle_pose(radius, 2.0 * kPi * t / period));
            break;
        }
        case CourseKind::figure_eight: {
            /* two tangent lobes, the full eight traversed twice */
            const double lobe = length / 4.0;
            const double radius = lobe * kStepLength / (2.0 * kPi);
            for (int t = 0; t < length; ++t) {
                const double u = std::fmod(static_cast<double>(t), 2.0 * lobe);
                if (u < lobe) {
                    gt.push_back(circle_pose(radius, 2.0 * kPi * u / lobe));
                } else {
                    const double psi = 2.0 * kPi * (u - lobe) / lobe;
                    gt.push_back(Pose2(radius * std::sin(psi),
                                       -radius * (1.0 - std::cos(psi)),
                                       -psi));
                }
            }
            break;
        }
        case CourseKind::campus_multi_loop: {
            /* one circle traversed 2.5 times: queries late in the run see
             * two disjoint ground-truth revisit ranges */
            const double period = length / 2.5;
            const double radius = period * kStepLength / (2.0 * kPi);
            for (int t = 0; t < length; ++t)
                gt.push_back(circle_pose(radius, 2.0 * kPi * t / period));
            break;
        }
    }
    return gt;
}

void plant_aliasing_clusters(WorldModel& world, uint64_t seed) {
    const int n = world.size();
    const int n_clusters = std::clamp(n / 400, 2, 12);
    const int members = 5;
    Rng rng(seed, kStreamClusters);
    world.cluster_of.assign(n, -1);
    for (int c = 0; c < n_clusters; ++c) {
        std::vector<int> cluster;
        for (int m = 0; m < members; ++m) {
            for (int attempt = 0; attempt < 200; ++attempt) {
                const int idx = static_cast<int>(rng.below(n));
                if (world.cluster_of[idx] >= 0)
                    continue;
                bool far = true;
                for (int other : cluster)
                    if (planar_distance(world.ground_truth[idx],
                                        world.ground_truth[other]) <
                        3.0 * world.revisit_radius) {
                        far = false;
                        break;
                    }
                if (!far)
                    continue;
                cluster.push_back(idx);
                world.cluster_of[idx] = c;
                break;
            }
        }
        if (cluster.size() >= 2) {
            std::sort(cluster.begin(), cluster.end());
            world.aliasing_clusters.push_back(std::move(cluster));
        } else {
            for (int idx : cluster)
                world.cluster_of[idx] = -1;
        }
    }
}

}  // namespace

CourseKind parse_course_kind(const std::string& name) {
    if (name == "loop")
        return CourseKind::loop;
    if (name == "figure_eight")
        return CourseKind::figure_eight;
    if (name == "campus_multi_loop")
        return CourseKind::campus_multi_loop;
    throw std::invalid_argument("unknown course kind: " + name);
}

std::string course_kind_name(CourseKind kind) {
    switch (kind) {
        case CourseKind::loop: return "loop";
        case CourseKind::figure_eight: return "figure_eight";
        case CourseKind::campus_multi_loop: return "campus_multi_loop";
    }
    return "?";
}

WorldModel generate_course(CourseKind kind, int length, uint64_t seed) {
    if (length < 10)
        throw std::invalid_argument("course length must be >= 10");
    WorldModel world;
    world.rng_seed = seed;
    world.ground_truth = make_trajectory(kind, length);
    world.cum_distance.resize(length);
    world.cum_distance[0] = 0.0;
    for (int t = 1; t < length; ++t)
        world.cum_distance[t] =
            world.cum_distance[t - 1] +
            planar_distance(world.ground_truth[t - 1], world.ground_truth[t]);
    plant_aliasing_clusters(world, seed);
    return world;
}

std::vector<Pose2> sample_odometry(const WorldModel& world, double sigma_xy,
                                   double sigma_theta, uint64_t seed) {
    std::vector<Pose2> odometry;
    odometry.reserve(world.size() - 1);
    for (int t = 1; t < world.size(); ++t) {
        const Pose2 u =
            relative(world.ground_truth[t - 1], world.ground_truth[t]);
        Rng rng(seed, kStreamOdometry, static_cast<uint64_t>(t));
        const Pose2 noise(sigma_xy * rng.gaussian(), sigma_xy * rng.gaussian(),
                          sigma_theta * rng.gaussian());
        odometry.push_back(compose(u, noise));
    }
    return odometry;
}

std::vector<RetrievalCandidate> retrieve(const WorldModel& world, int query,
                                         int n_candidates) {
    std::vector<RetrievalCandidate> all;
    if (query < 1 || n_candidates <= 0)
        return all;

    /* clusters "activated" by the query: any member near the query's true
     * location makes the whole cluster look like the query */
    std::vector<char> active(world.aliasing_clusters.size(), 0);
    for (std::size_t c = 0; c < world.aliasing_clusters.size(); ++c)
        for (int idx : world.aliasing_clusters[c])
            if (planar_distance(world.ground_truth[idx],
                                world.ground_truth[query]) <
                world.revisit_radius) {
                active[c] = 1;
                break;
            }

    all.reserve(query);
    for (int j = 0; j < query; ++j) {
        if (world.travel_distance(j, query) <= world.triviality_cutoff)
            continue;
        const bool true_match =
            planar_distance(world.ground_truth[j], world.ground_truth[query]) <
            world.revisit_radius;
        const int cluster = world.cluster_of[j];
        const bool aliased =
            !true_match && cluster >= 0 && active[cluster] != 0;
        const double mu = true_match  ? world.score_model.mu_true
                          : aliased   ? world.score_model.mu_alias
                                      : world.score_model.mu_distractor;
        Rng rng(world.rng_seed, kStreamRetrieval, static_cast<uint64_t>(query),
                static_cast<uint64_t>(j));
        const double score =
            std::clamp(mu + world.score_model.sigma * rng.gaussian(), 0.0, 1.0);
        all.push_back(RetrievalCandidate{query, j, score});
    }

    const std::size_t n = std::min<std::size_t>(n_candidates, all.size());
    std::partial_sort(all.begin(), all.begin() + n, all.end(),
                      [](const RetrievalCandidate& a,
                         const RetrievalCandidate& b) {
                          if (a.score != b.score)
                              return a.score > b.score;
                          return a.match < b.match;
                      });
    all.resize(n);
    return all;
}

double verify_oracle(const WorldModel& world, const OracleConfig& config,
                     int i, int j, uint64_t seed) {
    if (i == j)
        throw std::invalid_argument("verify_oracle: i == j");
    const bool correct = is_revisit_pair(world, std::max(i, j), std::min(i, j));
    Rng rng(seed, kStreamOracle, static_cast<uint64_t>(i),
            static_cast<uint64_t>(j));
    const double p_accept =
        correct ? config.p_true_accept : config.p_false_accept;
    const bool accept = rng.uniform01() < p_accept;
    if (accept)
        return rng.truncated_gaussian(0.75, config.score_noise_sigma, 0.5,
                                      1.0);
    return rng.truncated_gaussian(0.25, config.score_noise_sigma, 0.0,
                                  std::nextafter(0.5, 0.0));
}

std::vector<std::pair<int, int>> ground_truth_ranges(const WorldModel& world,
                                                     int query) {
    std::vector<std::pair<int, int>> ranges;
    int begin = -1;
    for (int j = 0; j < query; ++j) {
        const bool ok = is_revisit_pair(world, query, j);
        if (ok && begin < 0)
            begin = j;
        if (!ok && begin >= 0) {
            ranges.emplace_back(begin, j - 1);
            begin = -1;
        }
    }
    if (begin >= 0)
        ranges.emplace_back(begin, query - 1);
    return ranges;
}

bool is_revisit_pair(const WorldModel& world, int i, int j) {
    if (j >= i || j < 0 || i >= world.size())
        return false;
    return world.travel_distance(j, i) > world.triviality_cutoff &&
           planar_distance(world.ground_truth[i], world.ground_truth[j]) <
               world.revisit_radius;
}

Pose2 loop_measurement(const WorldModel& world, int i, int j, double sigma_xy,
                       double sigma_theta, uint64_t seed) {
    Rng rng(seed, kStreamLoopMeas, static_cast<uint64_t>(i),
            static_cast<uint64_t>(j));
    const Pose2 noise(sigma_xy * rng.gaussian(), sigma_xy * rng.gaussian(),
                      sigma_theta * rng.gaussian());
    if (is_revisit_pair(world, i, j))
        return compose(relative(world.ground_truth[j], world.ground_truth[i]),
                       noise);
    return noise;  /* false positive: claims "same place" */
}

void export_world(const std::string& gt_path, const std::string& cand_path,
                  const WorldModel& world, int n_candidates) {
    {
        std::ofstream out(gt_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open " + gt_path);
        write_trajectory_g2o(out, world.ground_truth);
    }
    std::ofstream out(cand_path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + cand_path);
    char buf[64];
    for (int q = 1; q < world.size(); ++q)
        for (const RetrievalCandidate& c : retrieve(world, q, n_candidates)) {
            std::snprintf(buf, sizeof(buf), "%.17g", c.score);
            out << "CAND " << c.query << ' ' << c.match << ' ' << buf << '\n';
        }
}

}  // namespace lcv
