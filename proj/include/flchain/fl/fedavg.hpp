#pragma once

#include <cstdint>
#include <vector>

#include "flchain/fl/task.hpp"
#include "flchain/fl/training.hpp"

namespace flchain {

/// Synchronous FedAvg with every client selected each round and the global
/// model set to the plain average of the local models. Returns
/// [w_0, w_1, ..., w_rounds]. Client k's round-t update draws from
/// client_training_stream(seed, k, t); batch size is capped at the shard size.
std::vector<ModelParams> reference_fedavg(const TaskBundle& bundle, const ModelParams& initial, const SgdParams& sgd,
                                          std::size_t rounds, std::uint64_t seed);

}  // namespace flchain
