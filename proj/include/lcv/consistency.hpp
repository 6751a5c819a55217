/* consistency.hpp -- incremental constraint x hypothesis consistency
 * table, bit-packed by row. Column additions and batch rebuilds are the
 * data-parallel kernels; serial reference versions are kept for testing
 * and benchmarking. */

#ifndef LCV_CONSISTENCY_HPP
#define LCV_CONSISTENCY_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "lcv/hypothesis.hpp"
#include "lcv/ledger.hpp"

namespace lcv {

/* Eq.-style consistency check: both endpoints must have defined
 * positions under h and be within distance_threshold of each other. */
bool constraint_consistent(const LoopConstraint& c,
                           const TrajectoryHypothesis& h,
                           double distance_threshold);

class ConsistencyMatrix {
  public:
    explicit ConsistencyMatrix(double distance_threshold = 10.0)
        : distance_threshold_(distance_threshold) {}

    /* Evaluates the new constraint against every existing hypothesis and
     * appends the row. Rows are indexed by constraint id. */
    void add_constraint_row(const LoopConstraint& c,
                            const std::vector<TrajectoryHypothesis>& hyps);

    /* Evaluates every existing constraint against the new hypothesis and
     * appends the column. OpenMP-parallel over constraints. */
    void add_hypothesis_column(const TrajectoryHypothesis& h,
                               const std::vector<LoopConstraint>& constraints);
    void add_hypothesis_column_serial(
        const TrajectoryHypothesis& h,
        const std::vector<LoopConstraint>& constraints);

    bool get(int constraint_id, int hyp_id) const;

    /* Ids of constraints consistent with hypothesis hyp_id, ascending. */
    std::vector<int> constraints_consistent_with(int hyp_id) const;

    int row_count() const { return static_cast<int>(rows_.size()); }
    int col_count() const { return col_count_; }
    double distance_threshold() const { return distance_threshold_; }
    std::size_t memory_bytes() const;

    bool operator==(const ConsistencyMatrix& other) const;

    /* From-scratch construction over full constraint/hypothesis sets. */
    static ConsistencyMatrix batch_rebuild(
        const std::vector<LoopConstraint>& constraints,
        const std::vector<TrajectoryHypothesis>& hyps,
        double distance_threshold);
    static ConsistencyMatrix batch_rebuild_serial(
        const std::vector<LoopConstraint>& constraints,
        const std::vector<TrajectoryHypothesis>& hyps,
        double distance_threshold);

    /* Sparse triplet dump: `constraint_id,hyp_id` for true entries. */
    void dump_triplets(std::ostream& out) const;

  private:
    void set_bit(int row, int col, bool value);

    double distance_threshold_;
    int col_count_ = 0;
    std::vector<std::vector<uint64_t>> rows_;  /* bit per column */
};

}  // namespace lcv

#endif  // LCV_CONSISTENCY_HPP
