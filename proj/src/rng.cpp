#include "mobo/rng.hpp"

#include <cmath>
#include <numbers>

namespace mobo {

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::uint64_t splitmix64(std::uint64_t state) {
    state += 0x9e3779b97f4a7c15ull;
    state = (state ^ (state >> 30)) * 0xbf58476d1ce4e5b9ull;
    state = (state ^ (state >> 27)) * 0x94d049bb133111ebull;
    return state ^ (state >> 31);
}

RngStream::RngStream(std::uint64_t root_seed, std::string_view name)
    : stream_seed_(splitmix64(root_seed ^ fnv1a64(name))), engine_(stream_seed_) {}

std::uint64_t RngStream::raw() {
    ++count_;
    return engine_();
}

double RngStream::uniform01() {
    return static_cast<double>(raw() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double RngStream::normal() {
    // u1 in (0, 1] so the log is finite.
    double u1 = static_cast<double>((raw() >> 11) + 1) * 0x1.0p-53;
    double u2 = static_cast<double>(raw() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void RngStream::seek(std::uint64_t target_count) {
    engine_.seed(stream_seed_);
    engine_.discard(target_count);
    count_ = target_count;
}

} // namespace mobo
