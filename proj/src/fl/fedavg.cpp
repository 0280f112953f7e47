#include "flchain/fl/fedavg.hpp"

#include <algorithm>

namespace flchain {

std::vector<ModelParams> reference_fedavg(const TaskBundle& bundle, const ModelParams& initial, const SgdParams& sgd,
                                          std::size_t rounds, std::uint64_t seed) {
    std::vector<ModelParams> trajectory{initial};
    const auto clients = static_cast<std::uint32_t>(bundle.shards.size());
    for (std::size_t t = 0; t < rounds; ++t) {
        const ModelParams& global = trajectory.back();
        ModelParams next(global.dim());
        auto acc = next.values();
        for (std::uint32_t k = 0; k < clients; ++k) {
            const auto& shard = bundle.shards[k];
            SgdParams local = sgd;
            local.batch_size = std::min(sgd.batch_size, shard.size());
            RngStream rng = client_training_stream(seed, k, t);
            const ModelParams w = local_update(global, bundle.task, shard.rows, local, rng);
            const auto v = w.values();
            for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += v[j];
        }
        for (double& a : acc) a /= static_cast<double>(clients);
        trajectory.push_back(std::move(next));
    }
    return trajectory;
}

}  // namespace flchain
