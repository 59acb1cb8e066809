#pragma once

#include <cstdint>
#include <limits>

namespace qclone {

/// SplitMix64 (Steele, Lea, Flood 2014). Satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        return mix(z);
    }

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Independent stream `index` of `seed`: the generator starts at mix(seed ^ mix(index + 1)).
/// Trial t of an experiment always draws from derive_stream(seed, t), whatever the
/// worker count.
inline SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(SplitMix64::mix(seed ^ SplitMix64::mix(index + 1)));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64::mix(seed ^ SplitMix64::mix(~index));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(SplitMix64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace qclone
