#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "flchain/engine/rng.hpp"
#include "flchain/fl/model.hpp"
#include "flchain/fl/task.hpp"

namespace flchain {

/// Raised when SGD produces a non-finite gradient or parameter.
class TrainingDiverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SgdParams {
    double learning_rate = 1e-2;  // eta
    std::size_t epochs = 5;       // E
    std::size_t batch_size = 64;  // B
};

/// E epochs of mini-batch SGD on the shard starting from `start`. Each epoch
/// reshuffles the shard with `rng`; the last batch of an epoch may be short.
/// The step is w <- w - eta * (mean gradient over the batch).
ModelParams local_update(const ModelParams& start, const LearningTask& task, std::span<const std::size_t> shard,
                         const SgdParams& params, RngStream& rng);

/// The stream a client uses for its `step`-th local update. The simulator and
/// the FedAvg reference both draw from here so their shuffles coincide.
RngStream client_training_stream(std::uint64_t seed, std::uint32_t client, std::uint64_t step);

struct WeightedModel {
    const ModelParams* params = nullptr;
    std::size_t samples = 0;
};

struct Aggregate {
    ModelParams params;
    std::size_t total_samples = 0;
};

/// Sample-weighted mean sum_k (D_k / D_b) w_k. Rejects an empty list.
Aggregate aggregate(std::span<const WeightedModel> updates);

struct TrainingCostModel {
    double instructions_per_sample_epoch = 3.6e7;
};

/// Wall time of a local update on a device executing `compute_power`
/// instructions per second.
double training_duration(std::size_t samples, std::size_t epochs, double compute_power, const TrainingCostModel& cost);

}  // namespace flchain
