#pragma once

#include <array>
#include <cstdint>

namespace sawphoton::rng {

/// Philox 4x32-10 block function (Salmon et al., SC'11). Maps a 128-bit
/// counter and 64-bit key to 128 random bits; distinct inputs give
/// independent outputs, which is what makes per-cycle substreams and
/// shard-independent merging possible.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Identifies one random stream: every (seed, stream) pair is an
/// independent, bit-for-bit reproducible sequence.
struct RngSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

/// Purpose tags for the streams a run consumes.
enum class StreamId : std::uint64_t {
    injection = 0,
    emission = 1,
    detector = 2,
    dark_counts = 3,
    sweep = 4,
};

/// Counter-based uniform/exponential/gaussian source. The Philox key mixes
/// (seed, stream); the 128-bit counter packs (substream, draw index), so a
/// stream can be split per cycle without touching any other stream's values.
class Stream {
  public:
    Stream(RngSpec spec, std::uint64_t substream = 0);
    Stream(std::uint64_t master_seed, StreamId stream, std::uint64_t substream = 0)
        : Stream(RngSpec{master_seed, static_cast<std::uint64_t>(stream)}, substream) {}

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Exponential with the given rate, by inversion of 1-u (never log 0).
    double exponential(double rate_per_s);
    /// Standard normal via Box-Muller; always consumes exactly two uniforms.
    double gaussian();
    /// True with probability p.
    bool bernoulli(double p);

  private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t substream_;
    std::uint64_t draw_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 4;  // exhausted
};

}  // namespace sawphoton::rng
