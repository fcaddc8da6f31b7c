#pragma once

// Counter-based uniform stream: Philox4x32-10 (Salmon et al., "Parallel
// random numbers: as easy as 1, 2, 3"). The draw at (seed, stream, index)
// is a pure function of its arguments, so partitioning a run across
// workers by index ranges cannot change any draw.
//
// Stream format "binexp-u01-v1": key = seed split into two 32-bit words,
// counter = (index lo, index hi, stream lo, stream hi); output words 0 and
// 1 form a 53-bit mantissa mapped to [0, 1).

#include <array>
#include <cstdint>

namespace binexp::rng {

struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    static constexpr int kRounds = 10;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < kRounds; ++round) {
            const std::uint64_t product0 =
                static_cast<std::uint64_t>(kMul0) * counter[0];
            const std::uint64_t product1 =
                static_cast<std::uint64_t>(kMul1) * counter[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(product0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(product0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(product1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(product1);
            counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return counter;
    }
};

/// Uniform double in [0, 1) for the given (seed, stream, index) address.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    const auto words = Philox4x32::block(counter, key);
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace binexp::rng
