#include "lcv/consistency.hpp"

#include <ostream>
#include <stdexcept>

namespace lcv {

bool constraint_consistent(const LoopConstraint& c,
                           const TrajectoryHypothesis& h,
                           double distance_threshold) {
    const auto pi = HypothesisEngine::position(h, c.query);
    const auto pj = HypothesisEngine::position(h, c.match);
    if (!pi || !pj)
        return false;  /* undefined positions count as inconsistent */
    return planar_distance(*pi, *pj) < distance_threshold;
}

void ConsistencyMatrix::set_bit(int row, int col, bool value) {
    auto& words = rows_[row];
    const std::size_t word = static_cast<std::size_t>(col) / 64;
    if (words.size() <= word)
        words.resize(word + 1, 0);
    if (value)
        words[word] |= uint64_t{1} << (col % 64);
}

bool ConsistencyMatrix::get(int constraint_id, int hyp_id) const {
    if (constraint_id < 0 || constraint_id >= row_count() || hyp_id < 0 ||
        hyp_id >= col_count_)
        throw std::out_of_range("consistency entry undefined");
    const auto& words = rows_[constraint_id];
    const std::size_t word = static_cast<std::size_t>(hyp_id) / 64;
    if (word >= words.size())
        return false;
    return (words[word] >> (hyp_id % 64)) & 1;
}

void ConsistencyMatrix::add_constraint_row(
    const LoopConstraint& c, const std::vector<TrajectoryHypothesis>& hyps) {
    if (c.id != row_count())
        throw std::invalid_argument("constraint rows must be added in order");
    if (static_cast<int>(hyps.size()) != col_count_)
        throw std::invalid_argument("hypothesis set out of sync");
    rows_.emplace_back((col_count_ + 63) / 64, 0);
    for (int j = 0; j < col_count_; ++j)
        if (constraint_consistent(c, hyps[j], distance_threshold_))
            set_bit(c.id, j, true);
}

void ConsistencyMatrix::add_hypothesis_column(
    const TrajectoryHypothesis& h,
    const std::vector<LoopConstraint>& constraints) {
    if (h.id != col_count_)
        throw std::invalid_argument("hypothesis columns must be added in order");
    if (static_cast<int>(constraints.size()) != row_count())
        throw std::invalid_argument("constraint set out of sync");
    const int col = col_count_++;
    const int n = row_count();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        set_bit(i, col,
                constraint_consistent(constraints[i], h, distance_threshold_));
}

void ConsistencyMatrix::add_hypothesis_column_serial(
    const TrajectoryHypothesis& h,
    const std::vector<LoopConstraint>& constraints) {
    if (h.id != col_count_)
        throw std::invalid_argument("hypothesis columns must be added in order");
    if (static_cast<int>(constraints.size()) != row_count())
        throw std::invalid_argument("constraint set out of sync");
    const int col = col_count_++;
    for (int i = 0; i < row_count(); ++i)
        set_bit(i, col,
                constraint_consistent(constraints[i], h, distance_threshold_));
}

std::vector<int> ConsistencyMatrix::constraints_consistent_with(
    int hyp_id) const {
    if (hyp_id < 0 || hyp_id >= col_count_)
        throw std::out_of_range("no such hypothesis column");
    std::vector<int> out;
    const std::size_t word = static_cast<std::size_t>(hyp_id) / 64;
    const uint64_t mask = uint64_t{1} << (hyp_id % 64);
    for (int i = 0; i < row_count(); ++i) {
        const auto& words = rows_[i];
        if (word < words.size() && (words[word] & mask))
            out.push_back(i);
    }
    return out;
}

std::size_t ConsistencyMatrix::memory_bytes() const {
    std::size_t total = sizeof(*this) + rows_.capacity() * sizeof(rows_[0]);
    for (const auto& words : rows_)
        total += words.capacity() * sizeof(uint64_t);
    return total;
}

bool ConsistencyMatrix::operator==(const ConsistencyMatrix& other) const {
    if (row_count() != other.row_count() || col_count_ != other.col_count_)
        return false;
    for (int i = 0; i < row_count(); ++i)
        for (int j = 0; j < col_count_; ++j)
            if (get(i, j) != other.get(i, j))
                return false;
    return true;
}

ConsistencyMatrix ConsistencyMatrix::batch_rebuild(
    const std::vector<LoopConstraint>& constraints,
    const std::vector<TrajectoryHypothesis>& hyps,
    double distance_threshold) {
    ConsistencyMatrix m(distance_threshold);
    m.col_count_ = static_cast<int>(hyps.size());
    m.rows_.assign(constraints.size(),
                   std::vector<uint64_t>((m.col_count_ + 63) / 64, 0));
    const int n = static_cast<int>(constraints.size());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m.col_count_; ++j)
            if (constraint_consistent(constraints[i], hyps[j],
                                      distance_threshold))
                m.rows_[i][j / 64] |= uint64_t{1} << (j % 64);
    return m;
}

ConsistencyMatrix ConsistencyMatrix::batch_rebuild_serial(
    const std::vector<LoopConstraint>& constraints,
    const std::vector<TrajectoryHypothesis>& hyps,
    double distance_threshold) {
    ConsistencyMatrix m(distance_threshold);
    m.col_count_ = static_cast<int>(hyps.size());
    m.rows_.assign(constraints.size(),
                   std::vector<uint64_t>((m.col_count_ + 63) / 64, 0));
    for (std::size_t i = 0; i < constraints.size(); ++i)
        for (int j = 0; j < m.col_count_; ++j)
            if (constraint_consistent(constraints[i], hyps[j],
                                      distance_threshold))
                m.rows_[i][j / 64] |= uint64_t{1} << (j % 64);
    return m;
}

void ConsistencyMatrix::dump_triplets(std::ostream& out) const {
    out << "constraint_id,hyp_id\n";
    for (int i = 0; i < row_count(); ++i)
        for (int j = 0; j < col_count_; ++j)
            if (get(i, j))
                out << i << ',' << j << '\n';
}

}  // namespace lcv
