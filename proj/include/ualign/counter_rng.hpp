#ifndef UALIGN_COUNTER_RNG_HPP
#define UALIGN_COUNTER_RNG_HPP

#include <cstdint>

namespace ualign {

/** Counter-based generator (splitmix64 of seed+counter): the n-th draw is a
 * pure function of (seed, n), so streams are reproducible across platforms
 * and insensitive to evaluation order. */
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() { return mix(seed_ + 0x9E3779B97F4A7C15ULL * (++counter_)); }

    /** Uniform double in [0,1). */
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /** Uniform integer in [0, n). */
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace ualign

#endif
