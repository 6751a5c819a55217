/* ledger.hpp -- append-only list of loop-closure constraints and their
 * verification records. */

#ifndef LCV_LEDGER_HPP
#define LCV_LEDGER_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lcv/world.hpp"

namespace lcv {

enum class StrategyTag { US, TS, NS };

const char* strategy_name(StrategyTag tag);

struct LoopConstraint {
    int id = 0;          /* insertion order, dense */
    int time_step = 0;   /* t the candidate arrived at */
    int rank = 0;        /* n in [1, N_t] */
    int query = 0;       /* i, the later location */
    int match = 0;       /* j < i */
    double retrieval_score = 0.0;
};

struct VerificationRecord {
    int constraint_id = 0;
    double oracle_score = 0.0;
    int verdict = 0;     /* 1 iff oracle_score >= threshold_used */
    double threshold_used = 0.0;
    int sequence_index = 0;  /* i-th verification overall */
    StrategyTag strategy = StrategyTag::US;
    int verify_step = 0;     /* time step the verification ran at */
};

class ConstraintLedger {
  public:
    /* Appends one constraint per candidate in rank order. t must be
     * strictly increasing across calls. Returns ids of the new rows. */
    std::vector<int> ingest(int t,
                            const std::vector<RetrievalCandidate>& candidates);

    /* Stores the verification outcome. Throws if the constraint does not
     * exist or was already verified at this threshold. */
    const VerificationRecord& record_verification(int constraint_id,
                                                  double oracle_score,
                                                  double threshold,
                                                  StrategyTag strategy,
                                                  int verify_step = 0);

    bool verified_at(int constraint_id, double threshold) const;

    /* Constraints with a verdict-1 record at this threshold, in
     * verification order. */
    std::vector<int> verified_matched(double threshold) const;

    std::optional<int> find_pair(int query, int match) const;

    const std::vector<LoopConstraint>& constraints() const {
        return constraints_;
    }
    const std::vector<VerificationRecord>& records() const {
        return records_;
    }
    const LoopConstraint& constraint(int id) const {
        return constraints_.at(id);
    }

    /* constraint_id,t,rank,i,j,retrieval_score,oracle_score,verdict,strategy
     * -- one row per verification record, header included. */
    void dump_csv(std::ostream& out) const;
    void dump_csv_file(const std::string& path) const;

  private:
    std::vector<LoopConstraint> constraints_;
    std::vector<VerificationRecord> records_;
    std::unordered_map<int, std::vector<int>> records_by_constraint_;
    std::unordered_map<uint64_t, int> pair_index_;
    int last_time_step_ = -1;
};

}  // namespace lcv

#endif  // LCV_LEDGER_HPP
