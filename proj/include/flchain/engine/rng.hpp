#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace flchain {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);

/// Labeled pseudo-random stream. The generator is mt19937_64 and every
/// distribution is computed here rather than through <random>'s
/// distributions, whose output is implementation-defined; identical
/// (label, seed) therefore gives identical draws on every platform.
class RngStream {
public:
    RngStream(std::string label, std::uint64_t seed);

    const std::string& label() const { return label_; }
    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on the open interval (0, 1).
    double uniform01();
    /// Uniform integer in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);
    double normal();
    double exponential(double mean);

    /// Independent child stream keyed by (label, index).
    RngStream derive(std::string_view sublabel, std::uint64_t index = 0) const;

private:
    std::string label_;
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Exponential draw with the given mean (seconds). Throws on mean <= 0.
double sample_exponential(RngStream& stream, double mean);

}  // namespace flchain
