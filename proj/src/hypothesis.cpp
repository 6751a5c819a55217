#include "lcv/hypothesis.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "lcv/g2o_io.hpp"

namespace lcv {

HypothesisEngine::HypothesisEngine(int window_size,
                                   Eigen::Matrix3d odom_information,
                                   Eigen::Matrix3d loop_information,
                                   LoopMeasurementFn loop_measurement,
                                   int max_iters, double tol)
    : window_size_(window_size),
      odom_information_(std::move(odom_information)),
      loop_information_(std::move(loop_information)),
      loop_measurement_(std::move(loop_measurement)),
      max_iters_(max_iters),
      tol_(tol) {
    if (window_size_ < 1)
        throw std::invalid_argument("window size must be >= 1");
}

std::optional<int> HypothesisEngine::maybe_spawn(
    int t, const ConstraintLedger& ledger,
    const std::vector<Pose2>& odometry) {
    if (t == 0 || t % window_size_ != 0)
        return std::nullopt;

    /* best constraint of the window (t - W, t]: highest retrieval score,
     * ties to the lowest rank, then earliest arrival */
    const auto& constraints = ledger.constraints();
    const LoopConstraint* best = nullptr;
    for (std::size_t k = next_constraint_; k < constraints.size(); ++k) {
        const LoopConstraint& c = constraints[k];
        if (c.time_step > t)
            break;
        if (c.time_step <= t - window_size_)
            continue;
        if (!best || c.retrieval_score > best->retrieval_score ||
            (c.retrieval_score == best->retrieval_score &&
             c.rank < best->rank))
            best = &c;
    }
    next_constraint_ = 0;
    for (std::size_t k = constraints.size(); k-- > 0;) {
        if (constraints[k].time_step <= t) {
            next_constraint_ = static_cast<int>(k) + 1;
            break;
        }
    }
    if (!best)
        return std::nullopt;

    std::vector<Pose2> window_odometry(odometry.begin(),
                                       odometry.begin() + t);
    PoseGraph graph = make_chain_graph(window_odometry, odom_information_);
    Edge loop;
    loop.from = best->match;
    loop.to = best->query;
    loop.measurement = loop_measurement_(best->query, best->match);
    loop.information = loop_information_;
    graph.loop_edges.push_back(loop);

    auto [optimized, report] = optimize(graph, max_iters_, tol_);

    TrajectoryHypothesis h;
    h.id = static_cast<int>(hypotheses_.size());
    h.window_id = t / window_size_;
    h.seed_constraint = best->id;
    h.converged = report.converged;
    h.trajectory =
        report.converged ? std::move(optimized.poses) : std::move(graph.poses);
    hypotheses_.push_back(std::move(h));
    return hypotheses_.back().id;
}

std::optional<Pose2> HypothesisEngine::position(const TrajectoryHypothesis& h,
                                                int t) {
    if (t < 0 || t >= static_cast<int>(h.trajectory.size()))
        return std::nullopt;
    return h.trajectory[t];
}

void HypothesisEngine::dump(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    std::ofstream index(dir + "/hypotheses.csv", std::ios::binary);
    if (!index)
        throw std::runtime_error("cannot open hypothesis index in " + dir);
    index << "hyp_id,window_id,seed_constraint,times_sampled,"
             "importance_weight\n";
    for (const TrajectoryHypothesis& h : hypotheses_) {
        index << h.id << ',' << h.window_id << ',' << h.seed_constraint << ','
              << h.times_sampled << ',' << h.importance_weight << '\n';
        char name[64];
        std::snprintf(name, sizeof(name), "/hyp_%05d.g2o", h.id);
        std::ofstream out(dir + name, std::ios::binary);
        write_trajectory_g2o(out, h.trajectory);
    }
}

}  // namespace lcv
