#include "lcv/pose_graph.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <stdexcept>

namespace lcv {

std::vector<Pose2> dead_reckon(const std::vector<Pose2>& odometry,
                               const Pose2& origin) {
    std::vector<Pose2> poses;
    poses.reserve(odometry.size() + 1);
    poses.push_back(origin);
    for (const Pose2& u : odometry)
        poses.push_back(compose(poses.back(), u));
    return poses;
}

PoseGraph make_chain_graph(const std::vector<Pose2>& odometry,
                           const Eigen::Matrix3d& odom_information,
                           const Pose2& origin) {
    PoseGraph g;
    g.poses = dead_reckon(odometry, origin);
    g.odometry_edges.reserve(odometry.size());
    for (std::size_t t = 0; t < odometry.size(); ++t) {
        Edge e;
        e.from = static_cast<int>(t);
        e.to = static_cast<int>(t) + 1;
        e.measurement = odometry[t];
        e.information = odom_information;
        g.odometry_edges.push_back(e);
    }
    return g;
}

Eigen::Vector3d edge_error(const PoseGraph& graph, const Edge& e) {
    if (e.from < 0 || e.to < 0 ||
        e.from >= static_cast<int>(graph.poses.size()) ||
        e.to >= static_cast<int>(graph.poses.size()))
        throw std::out_of_range("edge index out of bounds");
    const Pose2 delta = relative(graph.poses[e.from], graph.poses[e.to]);
    const Pose2 err = relative(e.measurement, delta);
    return Eigen::Vector3d(err.x, err.y, err.theta);
}

void edge_jacobians(const PoseGraph& graph, const Edge& e,
                    Eigen::Matrix3d& J_from, Eigen::Matrix3d& J_to) {
    const Pose2& xi = graph.poses[e.from];
    const Pose2& xj = graph.poses[e.to];
    const double ci = std::cos(xi.theta), si = std::sin(xi.theta);
    const double cz = std::cos(e.measurement.theta);
    const double sz = std::sin(e.measurement.theta);

    Eigen::Matrix2d Ri_t, Rz_t, dRi_t;
    Ri_t << ci, si, -si, ci;
    Rz_t << cz, sz, -sz, cz;
    dRi_t << -si, ci, -ci, -si;  /* d(Ri^T)/d(theta_i) */

    const Eigen::Vector2d dt(xj.x - xi.x, xj.y - xi.y);

    J_from.setZero();
    J_from.block<2, 2>(0, 0) = -Rz_t * Ri_t;
    J_from.block<2, 1>(0, 2) = Rz_t * (dRi_t * dt);
    J_from(2, 2) = -1.0;

    J_to.setZero();
    J_to.block<2, 2>(0, 0) = Rz_t * Ri_t;
    J_to(2, 2) = 1.0;
}

double graph_chi2(const PoseGraph& graph) {
    double chi2 = 0.0;
    for (const auto* edges : {&graph.odometry_edges, &graph.loop_edges})
        for (const Edge& e : *edges) {
            const Eigen::Vector3d r = edge_error(graph, e);
            chi2 += r.dot(e.information * r);
        }
    return chi2;
}

namespace {

/* Accumulates the normal equations over free variables (poses 1..T-1). */
void build_normal_equations(const PoseGraph& graph,
                            std::vector<Eigen::Triplet<double>>& triplets,
                            Eigen::VectorXd& b) {
    triplets.clear();
    b.setZero();
    Eigen::Matrix3d Ja, Jb;
    for (const auto* edges : {&graph.odometry_edges, &graph.loop_edges})
        for (const Edge& e : *edges) {
            const Eigen::Vector3d r = edge_error(graph, e);
            edge_jacobians(graph, e, Ja, Jb);
            const int ia = 3 * (e.from - 1);
            const int ib = 3 * (e.to - 1);
            const Eigen::Matrix3d W = e.information;
            if (e.from > 0) {
                const Eigen::Matrix3d Haa = Ja.transpose() * W * Ja;
                for (int r_ = 0; r_ < 3; ++r_)
                    for (int c_ = 0; c_ < 3; ++c_)
                        triplets.emplace_back(ia + r_, ia + c_, Haa(r_, c_));
                b.segment<3>(ia) -= Ja.transpose() * (W * r);
            }
            if (e.to > 0) {
                const Eigen::Matrix3d Hbb = Jb.transpose() * W * Jb;
                for (int r_ = 0; r_ < 3; ++r_)
                    for (int c_ = 0; c_ < 3; ++c_)
                        triplets.emplace_back(ib + r_, ib + c_, Hbb(r_, c_));
                b.segment<3>(ib) -= Jb.transpose() * (W * r);
            }
            if (e.from > 0 && e.to > 0) {
                const Eigen::Matrix3d Hab = Ja.transpose() * W * Jb;
                for (int r_ = 0; r_ < 3; ++r_)
                    for (int c_ = 0; c_ < 3; ++c_) {
                        triplets.emplace_back(ia + r_, ib + c_, Hab(r_, c_));
                        triplets.emplace_back(ib + c_, ia + r_, Hab(r_, c_));
                    }
            }
        }
}

void apply_step(PoseGraph& graph, const Eigen::VectorXd& dx) {
    for (std::size_t i = 1; i < graph.poses.size(); ++i) {
        const int k = 3 * (static_cast<int>(i) - 1);
        Pose2& p = graph.poses[i];
        p = Pose2(p.x + dx[k], p.y + dx[k + 1], p.theta + dx[k + 2]);
    }
}

template <class Solver>
std::pair<PoseGraph, OptimizeReport> lm_optimize(Solver& solver,
                                                 const PoseGraph& graph,
                                                 int max_iters, double tol) {
    OptimizeReport report;
    PoseGraph current = graph;
    report.initial_chi2 = graph_chi2(current);
    report.final_chi2 = report.initial_chi2;

    const int n = 3 * (static_cast<int>(graph.poses.size()) - 1);
    if (n <= 0) {
        report.converged = true;
        return {current, report};
    }

    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd b(n);
    Eigen::SparseMatrix<double> H(n, n);
    double chi2 = report.initial_chi2;
    /* damping carried across iterations: raised on rejected steps, decayed
     * on accepted ones, so the ladder is not re-climbed every iteration */
    double lambda = 0.0;

    for (int iter = 0; iter < max_iters; ++iter) {
        build_normal_equations(current, triplets, b);
        if (b.lpNorm<Eigen::Infinity>() < 1e-12 * (1.0 + chi2)) {
            report.converged = true;
            return {current, report};
        }

        /* explicit zero diagonal so damping can be added via coeffRef
         * without changing the sparsity pattern */
        for (int k = 0; k < n; ++k)
            triplets.emplace_back(k, k, 0.0);
        H.setFromTriplets(triplets.begin(), triplets.end());

        double applied = 0.0;
        bool accepted = false;
        PoseGraph candidate;
        double chi2_new = chi2;
        while (true) {
            if (lambda != applied) {
                for (int k = 0; k < n; ++k)
                    H.coeffRef(k, k) += lambda - applied;
                applied = lambda;
            }
            solver.compute(H);
            if (solver.info() == Eigen::Success) {
                const Eigen::VectorXd dx = solver.solve(b);
                /* a truncated CG solve is still a usable descent step */
                if ((solver.info() == Eigen::Success ||
                     solver.info() == Eigen::NoConvergence) &&
                    dx.allFinite()) {
                    candidate = current;
                    apply_step(candidate, dx);
                    chi2_new = graph_chi2(candidate);
                    if (chi2_new <= chi2) {
                        accepted = true;
                        break;
                    }
                }
            }
            lambda = (lambda == 0.0) ? 1e-6 : lambda * 10.0;
            if (lambda > 1e10)
                break;
        }

        if (accepted)
            lambda = lambda <= 1e-6 ? 0.0 : lambda / 10.0;

        if (!accepted) {
            /* singular even at maximal damping */
            report.iterations = iter;
            report.final_chi2 = chi2;
            report.converged = false;
            return {iter == 0 ? graph : current, report};
        }

        report.iterations = iter + 1;
        const double decrease = chi2 - chi2_new;
        current = std::move(candidate);
        chi2 = chi2_new;
        report.final_chi2 = chi2;
        if (chi2 == 0.0 || decrease <= tol * std::max(chi2, 1.0e-300)) {
            report.converged = true;
            return {current, report};
        }
    }
    report.converged = true;  /* ran out of iterations with progress */
    report.final_chi2 = chi2;
    return {current, report};
}

}  // namespace

std::pair<PoseGraph, OptimizeReport> optimize(const PoseGraph& graph,
                                              int max_iters, double tol) {
    /* with few chords the system is nearly banded and direct factorization
     * is near-linear; many long-range loop edges explode the fill-in, so
     * those graphs go to preconditioned CG, whose inexact steps are safe
     * because a step is only accepted when it actually lowers chi2 */
    if (graph.loop_edges.size() <= 32) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
        return lm_optimize(solver, graph, max_iters, tol);
    }
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>
        solver;
    solver.setTolerance(1e-10);
    return lm_optimize(solver, graph, max_iters, tol);
}

Eigen::Matrix3d odometry_information(double sigma_xy, double sigma_theta) {
    const double sx = std::max(sigma_xy, 1e-4);
    const double st = std::max(sigma_theta, 1e-4);
    Eigen::Matrix3d info = Eigen::Matrix3d::Zero();
    info(0, 0) = 1.0 / (sx * sx);
    info(1, 1) = 1.0 / (sx * sx);
    info(2, 2) = 1.0 / (st * st);
    return info;
}

}  // namespace lcv
