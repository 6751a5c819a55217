/* sampler.hpp -- strategy mixture for picking the next constraint to
 * verify: trajectory sampling (TS) and neighbor sampling (NS) at the
 * constraint level, breadth-first (BF) and depth-first (DF) at the
 * hypothesis level, uniform remainders at both levels. */

#ifndef LCV_SAMPLER_HPP
#define LCV_SAMPLER_HPP

#include <functional>
#include <optional>
#include <string>

#include "lcv/consistency.hpp"
#include "lcv/hypothesis.hpp"
#include "lcv/ledger.hpp"
#include "lcv/rng.hpp"

namespace lcv {

/* Remainders (1 - p_ts - p_ns) and (1 - p_bf - p_df) are the uniform
 * strategies' probabilities. */
struct StrategyMix {
    double p_ts = 0.0;
    double p_ns = 0.0;
    double p_bf = 0.0;
    double p_df = 0.0;
};

/* "x:y:z" ratio strings, normalized internally. Constraint mixes read as
 * uniform:NS:TS, hypothesis mixes as uniform:DF:BF. */
void parse_constraint_mix(const std::string& spec, StrategyMix& mix);
void parse_hypothesis_mix(const std::string& spec, StrategyMix& mix);

class GuidedSampler {
  public:
    using OracleFn = std::function<double(int, int)>;  /* (i, j) -> score */

    GuidedSampler(StrategyMix mix, uint64_t seed);

    /* Register freshly ingested constraints as unverified. */
    void notify_ingested(const std::vector<int>& ids);

    /* Draws a hypothesis by the (BF, DF, uniform) mixture and bumps its
     * times_sampled. Requires a nonempty hypothesis set. */
    int select_hypothesis(HypothesisEngine& engine);

    /* Draws a constraint by the (TS, NS, uniform) mixture, guided by
     * hypothesis h. Returns nullopt when the drawn strategy's pool is
     * empty; the chosen strategy is reported through tag_out. */
    std::optional<int> select_constraint(int h, const ConstraintLedger& ledger,
                                         const ConsistencyMatrix& consistency,
                                         double threshold,
                                         StrategyTag& tag_out);

    /* One full Eq.-3 round: hypothesis -> constraint -> oracle -> record,
     * with uniform fallback when the guided pool is empty. Importance
     * weights of all hypotheses consistent with a verdict-1 constraint
     * are bumped. Returns nullopt when nothing is left to verify. */
    std::optional<VerificationRecord> sampling_round(
        HypothesisEngine& engine, ConstraintLedger& ledger,
        const ConsistencyMatrix& consistency, const OracleFn& oracle,
        double threshold, int step);

    int rounds_executed() const { return round_; }
    /* verdict-1 constraint ids recorded through this sampler, in order */
    const std::vector<int>& verified_matched_ids() const {
        return verified_matched_;
    }
    int unverified_count() const {
        return static_cast<int>(unverified_.size());
    }
    const StrategyMix& mix() const { return mix_; }

  private:
    std::optional<int> draw_uniform_unverified(Rng& rng) const;
    bool is_unverified(int id) const;
    void mark_verified(int id);

    StrategyMix mix_;
    uint64_t seed_;
    int round_ = 0;
    uint64_t epoch_ = 0;  /* advances on every random decision point */
    std::vector<int> unverified_;          /* dense pool */
    std::vector<int> unverified_position_; /* id -> index in pool, or -1 */
    std::vector<int> verified_matched_;    /* verdict-1 ids, in order */
};

}  // namespace lcv

#endif  // LCV_SAMPLER_HPP
