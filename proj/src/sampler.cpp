#include "lcv/sampler.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace lcv {

namespace {

/* per-epoch stream purposes */
enum Purpose : uint64_t {
    kHypStrategy = 0,
    kHypDraw = 1,
    kConStrategy = 2,
    kConDraw = 3,
    kNsSeed = 4,
    kNsNeighbor = 5,
    kFallbackDraw = 6,
};

std::array<double, 3> parse_ratio(const std::string& spec) {
    std::array<double, 3> v{};
    std::istringstream ss(spec);
    std::string part;
    for (int k = 0; k < 3; ++k) {
        if (!std::getline(ss, part, ':'))
            throw std::invalid_argument("mix must be \"x:y:z\": " + spec);
        v[k] = std::stod(part);
        if (v[k] < 0.0)
            throw std::invalid_argument("mix ratios must be >= 0: " + spec);
    }
    if (std::getline(ss, part, ':'))
        throw std::invalid_argument("mix must have three parts: " + spec);
    const double sum = v[0] + v[1] + v[2];
    if (sum <= 0.0)
        throw std::invalid_argument("mix ratios must not all be zero");
    return {v[0] / sum, v[1] / sum, v[2] / sum};
}

}  // namespace

void parse_constraint_mix(const std::string& spec, StrategyMix& mix) {
    const auto r = parse_ratio(spec);  /* uniform : NS : TS */
    mix.p_ns = r[1];
    mix.p_ts = r[2];
}

void parse_hypothesis_mix(const std::string& spec, StrategyMix& mix) {
    const auto r = parse_ratio(spec);  /* uniform : DF : BF */
    mix.p_df = r[1];
    mix.p_bf = r[2];
}

GuidedSampler::GuidedSampler(StrategyMix mix, uint64_t seed)
    : mix_(mix), seed_(seed) {
    if (mix.p_ts + mix.p_ns > 1.0 + 1e-12 || mix.p_bf + mix.p_df > 1.0 + 1e-12)
        throw std::invalid_argument("strategy probabilities exceed 1");
}

void GuidedSampler::notify_ingested(const std::vector<int>& ids) {
    for (int id : ids) {
        if (id >= static_cast<int>(unverified_position_.size()))
            unverified_position_.resize(id + 1, -1);
        unverified_position_[id] = static_cast<int>(unverified_.size());
        unverified_.push_back(id);
    }
}

bool GuidedSampler::is_unverified(int id) const {
    return id >= 0 && id < static_cast<int>(unverified_position_.size()) &&
           unverified_position_[id] >= 0;
}

void GuidedSampler::mark_verified(int id) {
    const int pos = unverified_position_[id];
    const int last = unverified_.back();
    unverified_[pos] = last;
    unverified_position_[last] = pos;
    unverified_.pop_back();
    unverified_position_[id] = -1;
}

std::optional<int> GuidedSampler::draw_uniform_unverified(Rng& rng) const {
    if (unverified_.empty())
        return std::nullopt;
    return unverified_[rng.below(unverified_.size())];
}

int GuidedSampler::select_hypothesis(HypothesisEngine& engine) {
    if (engine.empty())
        throw std::logic_error("select_hypothesis: no hypotheses");
    const uint64_t epoch = epoch_++;
    const auto& hyps = engine.hypotheses();
    const int m = engine.count();

    Rng strategy_rng(seed_, epoch, kHypStrategy);
    const double u = strategy_rng.uniform01();
    int chosen;
    if (u < mix_.p_bf) {
        /* BF: least-sampled hypothesis, ties to the lowest id */
        chosen = 0;
        for (int j = 1; j < m; ++j)
            if (hyps[j].times_sampled < hyps[chosen].times_sampled)
                chosen = j;
    } else if (u < mix_.p_bf + mix_.p_df) {
        /* DF: uniform over the upper half by importance weight */
        std::vector<int> order(m);
        for (int j = 0; j < m; ++j)
            order[j] = j;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (hyps[a].importance_weight != hyps[b].importance_weight)
                return hyps[a].importance_weight > hyps[b].importance_weight;
            return a < b;
        });
        const int upper = (m + 1) / 2;
        Rng draw_rng(seed_, epoch, kHypDraw);
        chosen = order[draw_rng.below(upper)];
    } else {
        Rng draw_rng(seed_, epoch, kHypDraw);
        chosen = static_cast<int>(draw_rng.below(m));
    }
    engine.bump_sampled(chosen);
    return chosen;
}

std::optional<int> GuidedSampler::select_constraint(
    int h, const ConstraintLedger& ledger,
    const ConsistencyMatrix& consistency, double /*threshold*/,
    StrategyTag& tag_out) {
    const uint64_t epoch = epoch_++;
    Rng strategy_rng(seed_, epoch, kConStrategy);
    const double u = strategy_rng.uniform01();

    if (u < mix_.p_ts) {
        tag_out = StrategyTag::TS;
        std::vector<int> pool;
        for (int id : consistency.constraints_consistent_with(h))
            if (is_unverified(id))
                pool.push_back(id);
        if (pool.empty())
            return std::nullopt;
        Rng draw_rng(seed_, epoch, kConDraw);
        return pool[draw_rng.below(pool.size())];
    }

    if (u < mix_.p_ts + mix_.p_ns) {
        tag_out = StrategyTag::NS;
        /* seeds: verified-matched constraints consistent with h */
        std::vector<int> seeds;
        for (int id : verified_matched_)
            if (consistency.get(id, h))
                seeds.push_back(id);
        if (seeds.empty())
            return std::nullopt;
        Rng seed_rng(seed_, epoch, kNsSeed);
        const LoopConstraint& s =
            ledger.constraint(seeds[seed_rng.below(seeds.size())]);
        /* the four diagonal neighbors (i +- 1, j +- 1) */
        std::vector<int> neighbors;
        for (int di : {-1, 1})
            for (int dj : {-1, 1}) {
                const auto id = ledger.find_pair(s.query + di, s.match + dj);
                if (id && is_unverified(*id))
                    neighbors.push_back(*id);
            }
        if (neighbors.empty())
            return std::nullopt;
        Rng nb_rng(seed_, epoch, kNsNeighbor);
        return neighbors[nb_rng.below(neighbors.size())];
    }

    tag_out = StrategyTag::US;
    Rng draw_rng(seed_, epoch, kConDraw);
    return draw_uniform_unverified(draw_rng);
}

std::optional<VerificationRecord> GuidedSampler::sampling_round(
    HypothesisEngine& engine, ConstraintLedger& ledger,
    const ConsistencyMatrix& consistency, const OracleFn& oracle,
    double threshold, int step) {
    round_++;
    if (unverified_.empty())
        return std::nullopt;  /* skip: nothing left to verify */

    std::optional<int> picked;
    StrategyTag tag = StrategyTag::US;
    if (!engine.empty()) {
        const int guide = select_hypothesis(engine);
        picked = select_constraint(guide, ledger, consistency, threshold, tag);
    }
    if (!picked) {
        /* guided pool empty (or no hypotheses yet): uniform fallback */
        tag = StrategyTag::US;
        Rng rng(seed_, epoch_++, kFallbackDraw);
        picked = draw_uniform_unverified(rng);
    }

    const LoopConstraint& c = ledger.constraint(*picked);
    const double score = oracle(c.query, c.match);
    const VerificationRecord rec =
        ledger.record_verification(*picked, score, threshold, tag, step);
    mark_verified(*picked);
    if (rec.verdict == 1) {
        verified_matched_.push_back(*picked);
        /* every hypothesis this constraint is consistent with gains weight */
        for (int j = 0; j < consistency.col_count(); ++j)
            if (consistency.get(*picked, j))
                engine.bump_importance(j);
    }
    return rec;
}

}  // namespace lcv
