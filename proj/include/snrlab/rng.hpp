#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace snrlab {

// Counter-based PRNG stream: Philox4x32-10 (Salmon et al., SC'11).
//
// A stream is fully identified by (seed, stream_id). The generator keeps no
// hidden global state, so two streams with distinct ids are independent by
// construction and a Monte Carlo trial can be re-run in isolation. Copies are
// cheap values; a copied stream replays the same sequence.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_{static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)} {}

    // One keyed block: counter words (c0,c1) are the block index, (c2,c3) the
    // stream id. Exposed so the known-answer vectors can be checked directly.
    static std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                      std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint32_t lo0 = 0xD2511F53u * ctr[0];
            const std::uint32_t hi0 = mul_hi(0xD2511F53u, ctr[0]);
            const std::uint32_t lo1 = 0xCD9E8D57u * ctr[2];
            const std::uint32_t hi1 = mul_hi(0xCD9E8D57u, ctr[2]);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            block_ = philox4x32_10({static_cast<std::uint32_t>(counter_),
                                    static_cast<std::uint32_t>(counter_ >> 32),
                                    stream_[0], stream_[1]},
                                   key_);
            ++counter_;
            pos_ = 0;
        }
        return block_[pos_++];
    }

    // Uniform on the open interval (0, 1): 53-bit resolution, never 0 or 1,
    // so logarithms of the result are always finite.
    double next_unit() {
        const std::uint64_t hi = next_u32();
        const std::uint64_t lo = next_u32();
        const std::uint64_t bits = ((hi << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1p-53;
    }

    // Real N(0, 1) draw (Box-Muller, cosine branch).
    double next_normal() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    // Standard complex Gaussian entry: mean 0, E|z|^2 = 1, i.e. variance 1/2
    // per real component. One polar draw yields both components.
    std::complex<double> next_complex_gaussian() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-std::log(u1));
        return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
    }

private:
    static constexpr double two_pi = 6.28318530717958647692528676656;

    static std::uint32_t mul_hi(std::uint32_t a, std::uint32_t b) {
        return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) >> 32);
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 2> stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 4;
};

inline std::vector<std::complex<double>> sample_standard_complex_gaussian(RngStream& rng, int n) {
    if (n < 1) {
        throw ValidationError("sample_standard_complex_gaussian: n must be >= 1");
    }
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
    for (auto& z : out) {
        z = rng.next_complex_gaussian();
    }
    return out;
}

}  // namespace snrlab
