/* hypothesis.hpp -- windowed trajectory-hypothesis generation.
 *
 * One hypothesis per time window: the window's best-scored constraint is
 * added as a single loop edge to the odometry chain and the graph is
 * optimized. Hypotheses are frozen at creation. */

#ifndef LCV_HYPOTHESIS_HPP
#define LCV_HYPOTHESIS_HPP

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lcv/ledger.hpp"
#include "lcv/pose_graph.hpp"

namespace lcv {

struct TrajectoryHypothesis {
    int id = 0;
    int window_id = 0;
    int seed_constraint = 0;
    std::vector<Pose2> trajectory;  /* length = creation time + 1 */
    long times_sampled = 0;
    long importance_weight = 0;  /* consistent-and-verified constraints */
    bool converged = true;       /* optimizer outcome; kept either way */
};

class HypothesisEngine {
  public:
    /* loop_measurement(i, j) supplies the relative-pose measurement for
     * a constraint's loop edge. */
    using LoopMeasurementFn = std::function<Pose2(int, int)>;

    HypothesisEngine(int window_size, Eigen::Matrix3d odom_information,
                     Eigen::Matrix3d loop_information,
                     LoopMeasurementFn loop_measurement, int max_iters = 50,
                     double tol = 1e-6);

    /* Call once per time step. Spawns at window boundaries (t % W == 0)
     * when the window produced at least one constraint; the hypothesis id
     * is returned. odometry holds u_1..u_t. */
    std::optional<int> maybe_spawn(int t, const ConstraintLedger& ledger,
                                   const std::vector<Pose2>& odometry);

    /* Pose of location t under hypothesis h, if the hypothesis extends
     * that far. */
    static std::optional<Pose2> position(const TrajectoryHypothesis& h,
                                         int t);

    void bump_sampled(int id) { hypotheses_.at(id).times_sampled++; }
    void bump_importance(int id) { hypotheses_.at(id).importance_weight++; }
    void set_importance(int id, long w) {
        hypotheses_.at(id).importance_weight = w;
    }

    int window_size() const { return window_size_; }
    bool empty() const { return hypotheses_.empty(); }
    int count() const { return static_cast<int>(hypotheses_.size()); }
    const std::vector<TrajectoryHypothesis>& hypotheses() const {
        return hypotheses_;
    }
    const TrajectoryHypothesis& hypothesis(int id) const {
        return hypotheses_.at(id);
    }

    /* hyp_<id>.g2o trajectory files plus an index CSV. */
    void dump(const std::string& dir) const;

  private:
    int window_size_;
    Eigen::Matrix3d odom_information_;
    Eigen::Matrix3d loop_information_;
    LoopMeasurementFn loop_measurement_;
    int max_iters_;
    double tol_;
    std::vector<TrajectoryHypothesis> hypotheses_;
    int next_constraint_ = 0;  /* first constraint not yet windowed */
};

}  // namespace lcv

#endif  // LCV_HYPOTHESIS_HPP
