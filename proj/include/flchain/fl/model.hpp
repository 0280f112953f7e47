#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace flchain {

/// Dense parameter vector w of dimension d.
class ModelParams {
public:
    ModelParams() = default;
    explicit ModelParams(std::size_t dim, double fill = 0.0) : values_(dim, fill) {}
    explicit ModelParams(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t dim() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    bool all_finite() const;
    double max_abs_diff(const ModelParams& other) const;
    /// max_i |a_i - b_i| / max(1, max_i |b_i|)
    double relative_diff(const ModelParams& reference) const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
    std::vector<double> values_;
};

}  // namespace flchain
