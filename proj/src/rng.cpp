#include "ellsq/rng.hpp"

#include <cmath>
#include <numbers>

namespace ellsq {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t ctr[4], std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t out0 = hi1 ^ ctr[1] ^ k0;
    const std::uint32_t out2 = hi0 ^ ctr[3] ^ k1;
    ctr[0] = out0;
    ctr[1] = lo1;
    ctr[2] = out2;
    ctr[3] = lo0;
}

}  // namespace

void Philox::block(std::uint64_t blk, std::uint32_t out[4]) const {
    std::uint32_t ctr[4] = {
        static_cast<std::uint32_t>(blk),
        static_cast<std::uint32_t>(blk >> 32),
        static_cast<std::uint32_t>(ctr_hi_),
        static_cast<std::uint32_t>(ctr_hi_ >> 32),
    };
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int r = 0; r < 10; ++r) {
        philox_round(ctr, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    out[0] = ctr[0];
    out[1] = ctr[1];
    out[2] = ctr[2];
    out[3] = ctr[3];
}

std::uint32_t Philox::next_u32() {
    if (buf_pos_ == 4) {
        block(seq_block_++, buf_);
        buf_pos_ = 0;
    }
    return buf_[buf_pos_++];
}

std::uint64_t Philox::next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double Philox::next_uniform() {
    const std::uint64_t bits53 = next_u64() >> 11;
    return (static_cast<double>(bits53) + 0.5) * 0x1.0p-53;
}

double Philox::next_normal() {
    if (have_cached_normal_) {
        have_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    have_cached_normal_ = true;
    return r * std::cos(theta);
}

std::uint64_t stream_id(std::uint64_t sample_index, std::uint32_t purpose_tag) {
    // splitmix64 finalizer over the pair; collisions across purposes would
    // need a 64-bit birthday event
    std::uint64_t x = sample_index + 0x9E3779B97F4A7C15ull * (purpose_tag + 1ull);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

}  // namespace ellsq
