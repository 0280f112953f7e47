#include "flchain/engine/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flchain {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RngStream::RngStream(std::string label, std::uint64_t seed)
    : label_(std::move(label)), seed_(seed), engine_(splitmix64(seed ^ fnv1a64(label_))) {}

double RngStream::uniform01() {
    // 52 random mantissa bits, offset by half a step: never 0, never 1.
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

std::size_t RngStream::uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

double RngStream::normal() {
    // Box-Muller; one draw per call keeps the stream position simple to reason about.
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::exponential(double mean) { return -mean * std::log(uniform01()); }

RngStream RngStream::derive(std::string_view sublabel, std::uint64_t index) const {
    std::string child = label_;
    child += '/';
    child += sublabel;
    return RngStream(std::move(child), splitmix64(seed_ + 0x632be59bd9b4e019ULL * (index + 1)));
}

double sample_exponential(RngStream& stream, double mean) {
    if (!(mean > 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("sample_exponential: mean must be positive and finite");
    }
    return stream.exponential(mean);
}

}  // namespace flchain
