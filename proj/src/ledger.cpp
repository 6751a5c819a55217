#include "lcv/ledger.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace lcv {

namespace {
uint64_t pair_key(int query, int match) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(query)) << 32) |
           static_cast<uint32_t>(match);
}
}  // namespace

const char* strategy_name(StrategyTag tag) {
    switch (tag) {
        case StrategyTag::US: return "US";
        case StrategyTag::TS: return "TS";
        case StrategyTag::NS: return "NS";
    }
    return "?";
}

std::vector<int> ConstraintLedger::ingest(
    int t, const std::vector<RetrievalCandidate>& candidates) {
    if (t <= last_time_step_)
        throw std::invalid_argument(
            "ingest: time steps must be strictly increasing");
    last_time_step_ = t;
    std::vector<int> ids;
    ids.reserve(candidates.size());
    int rank = 1;
    for (const RetrievalCandidate& c : candidates) {
        LoopConstraint lc;
        lc.id = static_cast<int>(constraints_.size());
        lc.time_step = t;
        lc.rank = rank++;
        lc.query = c.query;
        lc.match = c.match;
        lc.retrieval_score = c.score;
        pair_index_.emplace(pair_key(lc.query, lc.match), lc.id);
        ids.push_back(lc.id);
        constraints_.push_back(lc);
    }
    return ids;
}

const VerificationRecord& ConstraintLedger::record_verification(
    int constraint_id, double oracle_score, double threshold,
    StrategyTag strategy, int verify_step) {
    if (constraint_id < 0 ||
        constraint_id >= static_cast<int>(constraints_.size()))
        throw std::invalid_argument("record_verification: no such constraint");
    if (verified_at(constraint_id, threshold))
        throw std::logic_error(
            "record_verification: already verified at this threshold");
    VerificationRecord rec;
    rec.constraint_id = constraint_id;
    rec.oracle_score = oracle_score;
    rec.threshold_used = threshold;
    rec.verdict = oracle_score >= threshold ? 1 : 0;
    rec.sequence_index = static_cast<int>(records_.size());
    rec.strategy = strategy;
    rec.verify_step = verify_step;
    records_by_constraint_[constraint_id].push_back(rec.sequence_index);
    records_.push_back(rec);
    return records_.back();
}

bool ConstraintLedger::verified_at(int constraint_id,
                                   double threshold) const {
    auto it = records_by_constraint_.find(constraint_id);
    if (it == records_by_constraint_.end())
        return false;
    for (int idx : it->second)
        if (records_[idx].threshold_used == threshold)
            return true;
    return false;
}

std::vector<int> ConstraintLedger::verified_matched(double threshold) const {
    std::vector<int> out;
    for (const VerificationRecord& rec : records_)
        if (rec.threshold_used == threshold && rec.verdict == 1)
            out.push_back(rec.constraint_id);
    return out;
}

std::optional<int> ConstraintLedger::find_pair(int query, int match) const {
    auto it = pair_index_.find(pair_key(query, match));
    if (it == pair_index_.end())
        return std::nullopt;
    return it->second;
}

void ConstraintLedger::dump_csv(std::ostream& out) const {
    out << "constraint_id,t,rank,i,j,retrieval_score,oracle_score,verdict,"
           "strategy\n";
    char buf[128];
    for (const VerificationRecord& rec : records_) {
        const LoopConstraint& c = constraints_[rec.constraint_id];
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%d,%.17g,%.17g,%d,%s\n",
                      c.id, c.time_step, c.rank, c.query, c.match,
                      c.retrieval_score, rec.oracle_score, rec.verdict,
                      strategy_name(rec.strategy));
        out << buf;
    }
}

void ConstraintLedger::dump_csv_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path);
    dump_csv(out);
}

}  // namespace lcv
