#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mobo {

// 64-bit FNV-1a. Used to derive substream seeds from names; stable across
// platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view text);

std::uint64_t splitmix64(std::uint64_t state);

// A named, counted random stream derived from a root seed.
//
// Every sampling primitive consumes a fixed number of raw 64-bit engine
// draws (uniform: 1, normal: 2), so the stream position is a plain draw
// counter that can be persisted with an experiment log and restored with
// seek(), giving bit-exact resumption.
class RngStream {
public:
    RngStream(std::uint64_t root_seed, std::string_view name);

    std::uint64_t raw();
    // Uniform on [0, 1); consumes one raw draw.
    double uniform01();
    double uniform(double lo, double hi);
    // Standard normal via Box-Muller; consumes exactly two raw draws.
    double normal();

    std::uint64_t count() const { return count_; }
    std::uint64_t stream_seed() const { return stream_seed_; }

    // Rewind or fast-forward to an absolute draw count.
    void seek(std::uint64_t target_count);

private:
    std::uint64_t stream_seed_;
    std::mt19937_64 engine_;
    std::uint64_t count_ = 0;
};

} // namespace mobo
