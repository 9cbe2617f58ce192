#pragma once

#include <array>
#include <cstdint>

namespace hpng {

std::uint64_t mix64(std::uint64_t x);

// Philox4x32-10 keyed by (seed, stream). Streams never overlap, so parallel
// tasks drawing from stream = task id reproduce bit for bit.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    // Uniform in [0, 1) with 53 random bits.
    double uniform();
    // Uniform in (0, 1).
    double uniform_open();

    CounterRng split(std::uint64_t id) const;

    static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key);

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

}  // namespace hpng
