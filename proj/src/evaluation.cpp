#include "lcv/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "lcv/rng.hpp"

namespace lcv {

bool is_correct(const WorldModel& world, const LoopConstraint& c) {
    return is_revisit_pair(world, c.query, c.match);
}

std::vector<PRPoint> pr_sweep(const WorldModel& world,
                              const ConstraintLedger& ledger,
                              const std::vector<double>& thresholds) {
    /* one (score, correctness, query) row per distinct verified constraint;
     * repeated records of a constraint carry the same deterministic score */
    struct Row {
        double score;
        bool correct;
        int query;
    };
    std::vector<Row> rows;
    std::set<int> seen;
    for (const VerificationRecord& rec : ledger.records()) {
        if (!seen.insert(rec.constraint_id).second)
            continue;
        const LoopConstraint& c = ledger.constraint(rec.constraint_id);
        rows.push_back({rec.oracle_score, is_correct(world, c), c.query});
    }

    /* the recall denominator spans all revisit-eligible queries, whether
     * or not retrieval proposed them */
    long eligible_queries = 0;
    for (int q = 1; q < world.size(); ++q)
        if (!ground_truth_ranges(world, q).empty())
            ++eligible_queries;

    long total_correct = 0;
    for (const LoopConstraint& c : ledger.constraints())
        if (is_correct(world, c))
            ++total_correct;

    std::vector<PRPoint> out;
    out.reserve(thresholds.size());
    for (double thr : thresholds) {
        PRPoint p;
        p.threshold = thr;
        std::set<int> covered;
        for (const Row& r : rows) {
            if (r.score < thr)
                continue;
            ++p.n_verified;
            if (r.correct) {
                ++p.n_correct;
                covered.insert(r.query);
            }
        }
        p.precision =
            p.n_verified == 0
                ? 1.0
                : static_cast<double>(p.n_correct) / p.n_verified;
        p.recall = eligible_queries == 0
                       ? 0.0
                       : static_cast<double>(covered.size()) /
                             eligible_queries;
        p.recall_constraint =
            total_correct == 0
                ? 0.0
                : static_cast<double>(p.n_correct) / total_correct;
        out.push_back(p);
    }
    return out;
}

double pr_area(std::vector<PRPoint> points) {
    if (points.empty())
        return 0.0;
    std::sort(points.begin(), points.end(),
              [](const PRPoint& a, const PRPoint& b) {
                  if (a.recall != b.recall)
                      return a.recall < b.recall;
                  return a.precision > b.precision;
              });
    double area = 0.0;
    double prev_r = 0.0;
    double prev_p = points.front().precision;
    for (const PRPoint& p : points) {
        area += (p.recall - prev_r) * 0.5 * (p.precision + prev_p);
        prev_r = p.recall;
        prev_p = p.precision;
    }
    return area;
}

std::vector<WindowRatio> per_window_ratios(const ConstraintLedger& ledger,
                                           const WorldModel& world,
                                           int window_size) {
    if (window_size < 1)
        throw std::invalid_argument("window size must be >= 1");
    std::map<std::pair<int, int>, WindowRatio> acc;
    for (const VerificationRecord& rec : ledger.records()) {
        const int window = rec.verify_step / window_size;
        const int tag = static_cast<int>(rec.strategy);
        WindowRatio& w = acc[{window, tag}];
        w.window_id = window;
        w.strategy = rec.strategy;
        ++w.n;
        if (rec.verdict == 1) {
            ++w.n_matched;
            if (is_correct(world, ledger.constraint(rec.constraint_id)))
                ++w.n_matched_correct;
        }
    }
    std::vector<WindowRatio> out;
    out.reserve(acc.size());
    for (auto& [key, w] : acc) {
        w.verified_ratio = static_cast<double>(w.n_matched) / w.n;
        w.correct_ratio = static_cast<double>(w.n_matched_correct) / w.n;
        out.push_back(w);
    }
    return out;
}

std::vector<GuidedVsUniformRow> guided_vs_uniform_trial(
    const WorldModel& world, const std::vector<LoopConstraint>& constraints,
    const std::vector<TrajectoryHypothesis>& hypotheses,
    const std::vector<double>& bucket_edges, int rounds_per_hypothesis,
    uint64_t seed, double distance_threshold) {
    if (bucket_edges.size() < 2)
        throw std::invalid_argument("need at least one bucket");

    std::vector<char> correct(constraints.size(), 0);
    for (std::size_t k = 0; k < constraints.size(); ++k)
        correct[k] = is_correct(world, constraints[k]) ? 1 : 0;

    std::vector<GuidedVsUniformRow> rows(bucket_edges.size() - 1);
    for (std::size_t b = 0; b + 1 < bucket_edges.size(); ++b) {
        rows[b].rmse_lo = bucket_edges[b];
        rows[b].rmse_hi = bucket_edges[b + 1];
    }

    for (const TrajectoryHypothesis& h : hypotheses) {
        const double rmse = trajectory_rmse(h.trajectory, world.ground_truth);
        int bucket = -1;
        for (std::size_t b = 0; b + 1 < bucket_edges.size(); ++b)
            if (rmse >= bucket_edges[b] && rmse < bucket_edges[b + 1])
                bucket = static_cast<int>(b);
        if (bucket < 0)
            continue;
        GuidedVsUniformRow& row = rows[bucket];
        ++row.n_hypotheses;

        std::vector<int> pool;
        for (std::size_t k = 0; k < constraints.size(); ++k)
            if (constraint_consistent(constraints[k], h, distance_threshold))
                pool.push_back(static_cast<int>(k));

        Rng rng(seed, 0x6775, static_cast<uint64_t>(h.id));
        std::size_t remaining = pool.size();
        for (int r = 0; r < rounds_per_hypothesis; ++r) {
            /* guided draws verify (and thus consume) pool entries, so they
             * are taken without replacement; once the consistent pool is
             * exhausted the draw falls back to uniform */
            int g;
            if (remaining > 0) {
                const std::size_t pick = rng.below(remaining);
                g = pool[pick];
                std::swap(pool[pick], pool[remaining - 1]);
                --remaining;
            } else {
                g = static_cast<int>(rng.below(constraints.size()));
            }
            ++row.guided_draws;
            row.guided_hits += correct[g];
            const int u = static_cast<int>(rng.below(constraints.size()));
            ++row.uniform_draws;
            row.uniform_hits += correct[u];
        }
    }

    for (GuidedVsUniformRow& row : rows) {
        if (row.guided_draws > 0)
            row.guided_success =
                static_cast<double>(row.guided_hits) / row.guided_draws;
        if (row.uniform_draws > 0)
            row.uniform_success =
                static_cast<double>(row.uniform_hits) / row.uniform_draws;
    }
    return rows;
}

double trajectory_rmse(const std::vector<Pose2>& trajectory,
                       const std::vector<Pose2>& ground_truth) {
    const std::size_t n = std::min(trajectory.size(), ground_truth.size());
    if (n == 0)
        return 0.0;
    double sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double d = planar_distance(trajectory[t], ground_truth[t]);
        sum += d * d;
    }
    return std::sqrt(sum / n);
}

namespace {
std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path);
    return out;
}
std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

void write_pr_csv(const std::string& path, const std::vector<PRPoint>& pts) {
    auto out = open_csv(path);
    out << "threshold,precision,recall,n_verified,n_correct,"
           "recall_constraint\n";
    for (const PRPoint& p : pts)
        out << num(p.threshold) << ',' << num(p.precision) << ','
            << num(p.recall) << ',' << p.n_verified << ',' << p.n_correct
            << ',' << num(p.recall_constraint) << '\n';
}

void write_window_csv(const std::string& path,
                      const std::vector<WindowRatio>& rows) {
    auto out = open_csv(path);
    out << "window_id,strategy,n,n_matched,n_matched_correct,verified_ratio,"
           "correct_ratio\n";
    for (const WindowRatio& w : rows)
        out << w.window_id << ',' << strategy_name(w.strategy) << ',' << w.n
            << ',' << w.n_matched << ',' << w.n_matched_correct << ','
            << num(w.verified_ratio) << ',' << num(w.correct_ratio) << '\n';
}

void write_guided_vs_uniform_csv(const std::string& path,
                                 const std::vector<GuidedVsUniformRow>& rows) {
    auto out = open_csv(path);
    out << "rmse_lo,rmse_hi,n_hypotheses,guided_draws,guided_hits,"
           "uniform_draws,uniform_hits,guided_success,uniform_success\n";
    for (const GuidedVsUniformRow& r : rows)
        out << num(r.rmse_lo) << ',' << num(r.rmse_hi) << ','
            << r.n_hypotheses << ',' << r.guided_draws << ',' << r.guided_hits
            << ',' << r.uniform_draws << ',' << r.uniform_hits << ','
            << num(r.guided_success) << ',' << num(r.uniform_success) << '\n';
}

}  // namespace lcv
