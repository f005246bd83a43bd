#pragma once

#include <cstdint>

namespace ellsq {

// Philox4x32-10 counter-based generator. A stream is keyed by
// (master_seed, stream_index); values are addressed by a 64-bit counter, so
// batches of samples can be generated on any number of threads in any order
// and still come out bit-identical.
class Philox {
  public:
    Philox(std::uint64_t master_seed, std::uint64_t stream_index)
        : key0_(static_cast<std::uint32_t>(master_seed)),
          key1_(static_cast<std::uint32_t>(master_seed >> 32)),
          ctr_hi_(stream_index) {}

    // four 32-bit words at block counter `block`
    void block(std::uint64_t blk, std::uint32_t out[4]) const;

    // sequential convenience interface
    std::uint32_t next_u32();
    std::uint64_t next_u64();
    // uniform in (0,1), 53-bit resolution, never exactly 0 or 1
    double next_uniform();
    // standard normal via Box-Muller
    double next_normal();

  private:
    std::uint32_t key0_, key1_;
    std::uint64_t ctr_hi_;
    std::uint64_t seq_block_ = 0;
    std::uint32_t buf_[4] = {0, 0, 0, 0};
    int buf_pos_ = 4;
    bool have_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

// Stable derivation of per-purpose stream indices from small tags, so
// unrelated consumers of the same master seed never share a stream.
std::uint64_t stream_id(std::uint64_t sample_index, std::uint32_t purpose_tag);

}  // namespace ellsq
