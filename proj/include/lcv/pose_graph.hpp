/* pose_graph.hpp -- SE(2) pose-graph nonlinear least squares.
 *
 * The graph is a chain of poses connected by odometry edges plus an
 * arbitrary set of loop-closure edges. Pose 0 is gauge-fixed. The solver
 * is Gauss-Newton with additive damping escalated on step rejection. */

#ifndef LCV_POSE_GRAPH_HPP
#define LCV_POSE_GRAPH_HPP

#include <Eigen/Core>
#include <vector>

#include "lcv/pose2.hpp"

namespace lcv {

struct Edge {
    int from = 0;
    int to = 0;
    Pose2 measurement;               /* relative transform from -> to */
    Eigen::Matrix3d information = Eigen::Matrix3d::Identity();
};

struct PoseGraph {
    std::vector<Pose2> poses;        /* pose 0 held constant */
    std::vector<Edge> odometry_edges;  /* exactly the chain t -> t+1 */
    std::vector<Edge> loop_edges;
};

struct OptimizeReport {
    int iterations = 0;
    double initial_chi2 = 0.0;
    double final_chi2 = 0.0;
    bool converged = false;
};

/* pose_0 = origin, pose_{t+1} = compose(pose_t, u_{t+1}). */
std::vector<Pose2> dead_reckon(const std::vector<Pose2>& odometry,
                               const Pose2& origin = Pose2::identity());

/* Chain graph with poses dead-reckoned from the odometry measurements. */
PoseGraph make_chain_graph(const std::vector<Pose2>& odometry,
                           const Eigen::Matrix3d& odom_information,
                           const Pose2& origin = Pose2::identity());

/* Residual vec(relative(measurement, relative(pose_from, pose_to))),
 * angle component normalized to (-pi, pi]. */
Eigen::Vector3d edge_error(const PoseGraph& graph, const Edge& e);

/* Jacobians of edge_error w.r.t. the from- and to-pose. */
void edge_jacobians(const PoseGraph& graph, const Edge& e,
                    Eigen::Matrix3d& J_from, Eigen::Matrix3d& J_to);

double graph_chi2(const PoseGraph& graph);

/* Gauss-Newton with Levenberg-style damping fallback. chi2 is
 * non-increasing over accepted steps; pose 0 is never touched. On a
 * singular system that damping cannot rescue, the input graph is
 * returned unchanged with converged = false. */
std::pair<PoseGraph, OptimizeReport> optimize(const PoseGraph& graph,
                                              int max_iters = 50,
                                              double tol = 1e-6);

/* diag(1/sx^2, 1/sx^2, 1/st^2) with sigmas clamped away from zero. */
Eigen::Matrix3d odometry_information(double sigma_xy, double sigma_theta);

}  // namespace lcv

#endif  // LCV_POSE_GRAPH_HPP
