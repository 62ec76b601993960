#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace divchain {

// Philox4x32-10 counter-based generator. A (seed, stream) pair names an independent
// sequence; trial i of any estimator draws from stream i, so results do not depend on
// how trials are spread across threads.
class Philox {
public:
    using result_type = std::uint32_t;
    using Block = std::array<std::uint32_t, 4>;

    Philox(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)}
    {
    }

    static Block block(Block ctr, std::array<std::uint32_t, 2> key)
    {
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t(0xD2511F53u) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

    std::uint32_t operator()()
    {
        if (used_ == 4) {
            buf_ = block(ctr_, key_);
            if (++ctr_[0] == 0) ++ctr_[1];
            used_ = 0;
        }
        return buf_[used_++];
    }

    static constexpr std::uint32_t min() { return 0; }
    static constexpr std::uint32_t max() { return 0xFFFFFFFFu; }

    // 53-bit uniform on [0, 1)
    double uniform()
    {
        std::uint64_t hi = (*this)() >> 5, lo = (*this)() >> 6;
        return (double(hi) * 67108864.0 + double(lo)) * 0x1.0p-53;
    }

    // uniform on (0, 1], safe under log
    double uniform_pos() { return 1.0 - uniform(); }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * double(n)) % n; }

private:
    std::array<std::uint32_t, 2> key_;
    Block ctr_;
    Block buf_{};
    int used_ = 4;
};

}  // namespace divchain
