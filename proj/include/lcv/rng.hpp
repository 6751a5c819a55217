/* rng.hpp -- counter-based deterministic random streams.
 *
 * Every random draw in the project comes from a stream keyed by an
 * explicit (seed, purpose, indices...) tuple, so a draw for one purpose
 * never perturbs draws for another and repeated evaluation of the same
 * key yields the same value on any platform. */

#ifndef LCV_RNG_HPP
#define LCV_RNG_HPP

#include <cmath>
#include <cstdint>

#include "lcv/pose2.hpp"

namespace lcv {

inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t hash_mix(uint64_t a, uint64_t b) {
    uint64_t s = a;
    s ^= splitmix64(s) + b;
    return splitmix64(s);
}

/* Deterministic PRNG stream. Construct with up to four key words. */
class Rng {
  public:
    explicit Rng(uint64_t k0, uint64_t k1 = 0, uint64_t k2 = 0,
                 uint64_t k3 = 0) {
        state_ = hash_mix(hash_mix(hash_mix(k0, k1), k2), k3);
    }

    uint64_t next_u64() { return splitmix64(state_); }

    /* Uniform in the open interval (0, 1). */
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /* Standard normal via Box-Muller (two draws per call). */
    double gaussian() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    /* Unbiased uniform integer in [0, n). n must be > 0. */
    uint64_t below(uint64_t n) {
        const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    /* Gaussian N(mean, sigma) truncated to [lo, hi] by rejection.
     * Falls back to the clamped mean after a bounded number of tries. */
    double truncated_gaussian(double mean, double sigma, double lo,
                              double hi) {
        if (sigma <= 0.0)
            return std::fmin(hi, std::fmax(lo, mean));
        for (int i = 0; i < 128; ++i) {
            const double v = mean + sigma * gaussian();
            if (v >= lo && v <= hi)
                return v;
        }
        return std::fmin(hi, std::fmax(lo, mean));
    }

  private:
    uint64_t state_;
};

}  // namespace lcv

#endif  // LCV_RNG_HPP
