#include "flchain/fl/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace flchain {

ModelParams local_update(const ModelParams& start, const LearningTask& task, std::span<const std::size_t> shard,
                         const SgdParams& params, RngStream& rng) {
    if (shard.empty()) throw std::invalid_argument("local_update: empty shard");
    if (!(params.learning_rate > 0.0)) throw std::invalid_argument("local_update: learning rate must be positive");
    if (params.epochs < 1) throw std::invalid_argument("local_update: need at least one epoch");
    if (params.batch_size < 1 || params.batch_size > shard.size()) {
        throw std::invalid_argument("local_update: batch size must lie in [1, shard size]");
    }
    if (start.dim() != task.dimension()) throw std::invalid_argument("local_update: model dimension mismatch");

    ModelParams w = start;
    std::vector<double> grad(w.dim());
    std::vector<std::size_t> order(shard.begin(), shard.end());
    const std::span<const std::size_t> all(order);
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);
        for (std::size_t b = 0; b < order.size(); b += params.batch_size) {
            const auto batch = all.subspan(b, std::min(params.batch_size, order.size() - b));
            const double loss = task.gradient(w, task.train(), batch, grad);
            auto v = w.values();
            for (std::size_t j = 0; j < grad.size(); ++j) {
                if (!std::isfinite(grad[j])) {
                    throw TrainingDiverged("local_update: non-finite gradient at epoch " + std::to_string(epoch) +
                                           " (loss " + std::to_string(loss) + "); learning rate too large?");
                }
                v[j] -= params.learning_rate * grad[j];
            }
        }
    }
    if (!w.all_finite()) throw TrainingDiverged("local_update: non-finite parameters after training");
    return w;
}

RngStream client_training_stream(std::uint64_t seed, std::uint32_t client, std::uint64_t step) {
    return RngStream("training-data", seed).derive("client", client).derive("step", step);
}

Aggregate aggregate(std::span<const WeightedModel> updates) {
    if (updates.empty()) throw std::invalid_argument("aggregate: no updates");
    const std::size_t dim = updates.front().params->dim();
    std::size_t total = 0;
    for (const auto& u : updates) {
        if (u.params->dim() != dim) throw std::invalid_argument("aggregate: dimension mismatch");
        total += u.samples;
    }
    if (total == 0) throw std::invalid_argument("aggregate: zero total samples");
    ModelParams out(dim);
    auto acc = out.values();
    for (const auto& u : updates) {
        const double weight = static_cast<double>(u.samples) / static_cast<double>(total);
        const auto v = u.params->values();
        for (std::size_t j = 0; j < dim; ++j) acc[j] += weight * v[j];
    }
    return Aggregate{std::move(out), total};
}

double training_duration(std::size_t samples, std::size_t epochs, double compute_power, const TrainingCostModel& cost) {
    if (samples == 0 || epochs == 0 || !(compute_power > 0.0) || !(cost.instructions_per_sample_epoch > 0.0)) {
        throw std::invalid_argument("training_duration: all inputs must be positive");
    }
    return cost.instructions_per_sample_epoch * static_cast<double>(samples) * static_cast<double>(epochs) /
           compute_power;
}

}  // namespace flchain
