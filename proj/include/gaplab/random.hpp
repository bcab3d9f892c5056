// Copyright (c) 2026 The gaplab authors
// SPDX-License-Identifier: MIT
//
// Counter-based random streams (Philox4x64-10) with a splittable
// (master_seed, replication_index) keying scheme.  Every replication owns a
// disjoint stream; identical StreamSpec values reproduce identical draws on
// every platform.

#pragma once

#include <array>
#include <cstdint>
#include <cmath>
#include <limits>

namespace gaplab {

// Identifies one replication's stream.  Same (master_seed, replication_index)
// means bit-identical draws for a fixed consumer.
struct StreamSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t replication_index = 0;
};

namespace detail {

inline constexpr std::uint64_t philox_m0 = 0xD2E7470EE14C6C93ULL;
inline constexpr std::uint64_t philox_m1 = 0xCA5A826395121157ULL;
inline constexpr std::uint64_t philox_w0 = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t philox_w1 = 0xBB67AE8584CAA73BULL;

inline void philox_mulhilo(std::uint64_t a, std::uint64_t b,
                           std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

inline void philox_round(std::array<std::uint64_t, 4>& ctr,
                         const std::array<std::uint64_t, 2>& key) {
    std::uint64_t hi0, lo0, hi1, lo1;
    philox_mulhilo(philox_m0, ctr[0], hi0, lo0);
    philox_mulhilo(philox_m1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

} // namespace detail

// Applies the ten-round Philox4x64 bijection to one counter block.
inline std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> ctr,
                                               std::array<std::uint64_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += detail::philox_w0;
            key[1] += detail::philox_w1;
        }
        detail::philox_round(ctr, key);
    }
    return ctr;
}

// Stream of 64-bit words, uniforms, and unit exponentials.  The key is
// (master_seed, replication_index); block k of four outputs is the Philox
// image of counter (k, 0, 0, 0).
class Stream {
public:
    explicit Stream(StreamSpec spec)
        : key_{spec.master_seed, spec.replication_index} {}

    Stream(std::uint64_t master_seed, std::uint64_t replication_index)
        : key_{master_seed, replication_index} {}

    std::uint64_t next_u64() {
        if (pos_ == 4) refill();
        return buffer_[pos_++];
    }

    // Uniform on the open interval (0,1): (w >> 11 + 1/2) * 2^-53.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Unit exponential by inverse CDF on an open-interval uniform.
    double next_exponential() { return -std::log(next_uniform()); }

    // Jumps to an absolute block index; draw position resets to the block head.
    void seek_block(std::uint64_t block) {
        counter_ = block;
        pos_ = 4;
    }

    std::uint64_t block_index() const { return counter_; }

private:
    void refill() {
        buffer_ = philox4x64({counter_, 0, 0, 0}, key_);
        ++counter_;
        pos_ = 0;
    }

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> buffer_{};
    std::uint64_t counter_ = 0;
    int pos_ = 4;
};

} // namespace gaplab
