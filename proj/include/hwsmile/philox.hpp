#pragma once

#include <cmath>
#include <cstdint>

namespace hwsmile {

// Philox4x32-10 counter-based generator. Stateless: output is a pure
// function of (key, counter), so per-path substreams indexed by path number
// reproduce identically regardless of execution order.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    struct Block {
        std::uint32_t x[4];
    };

    static Block generate(std::uint64_t key, std::uint64_t counter_hi, std::uint64_t counter_lo) {
        std::uint32_t c0 = static_cast<std::uint32_t>(counter_lo);
        std::uint32_t c1 = static_cast<std::uint32_t>(counter_lo >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(counter_hi);
        std::uint32_t c3 = static_cast<std::uint32_t>(counter_hi >> 32);
        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return Block{{c0, c1, c2, c3}};
    }
};

// Standard normal stream for one path: Box-Muller over Philox uniforms.
class NormalStream {
  public:
    NormalStream(std::uint64_t seed, std::uint64_t stream_index, bool negate = false)
        : seed_(seed), stream_(stream_index), negate_(negate) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return negate_ ? -spare_ : spare_;
        }
        const Philox4x32::Block blk = Philox4x32::generate(seed_, stream_, block_++);
        const double u1 = to_unit(blk.x[0], blk.x[1]);
        const double u2 = to_unit(blk.x[2], blk.x[3]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        const double z = radius * std::cos(angle);
        return negate_ ? -z : z;
    }

  private:
    static double to_unit(std::uint32_t lo, std::uint32_t hi) {
        const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
        // 53-bit mantissa in (0, 1); the half-ulp offset keeps log() finite.
        return (bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    bool negate_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace hwsmile
