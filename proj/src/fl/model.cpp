#include "flchain/fl/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace flchain {

bool ModelParams::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ModelParams::max_abs_diff(const ModelParams& other) const {
    if (other.dim() != dim()) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) m = std::max(m, std::abs(values_[i] - other.values_[i]));
    return m;
}

double ModelParams::relative_diff(const ModelParams& reference) const {
    double scale = 1.0;
    for (double v : reference.values_) scale = std::max(scale, std::abs(v));
    return max_abs_diff(reference) / scale;
}

}  // namespace flchain
