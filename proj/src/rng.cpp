#include "hpng/rng.hpp"

namespace hpng {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::array<std::uint32_t, 4> CounterRng::philox(std::array<std::uint32_t, 4> c,
                                                std::array<std::uint32_t, 2> k) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int r = 0; r < 10; ++r) {
        const std::uint64_t p0 = std::uint64_t(M0) * c[0];
        const std::uint64_t p1 = std::uint64_t(M1) * c[2];
        const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
        const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += W0;
        k[1] += W1;
    }
    return c;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t k = mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL));
    key_ = {std::uint32_t(k), std::uint32_t(k >> 32)};
}

std::uint32_t CounterRng::next_u32() {
    if (pos_ == 4) {
        buf_ = philox({std::uint32_t(counter_), std::uint32_t(counter_ >> 32), 0u, 0u}, key_);
        ++counter_;
        pos_ = 0;
    }
    return buf_[pos_++];
}

std::uint64_t CounterRng::next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
}

double CounterRng::uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::uniform_open() {
    return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

CounterRng CounterRng::split(std::uint64_t id) const {
    const std::uint64_t k = (std::uint64_t(key_[1]) << 32) | key_[0];
    return CounterRng(k, id ^ 0xA24BAED4963EE407ULL);
}

}  // namespace hpng
