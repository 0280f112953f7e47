#include "flchain/config/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "flchain/chain/consensus.hpp"
#include "flchain/fl/fedavg.hpp"
#include "flchain/metrics/metrics.hpp"
#include "flchain/metrics/report.hpp"
#include "flchain/simulation.hpp"

namespace flchain {

OracleResult run_oracle(ScenarioConfig config, std::size_t rounds) {
    ScenarioConfig cfg = config.degenerate();
    // Blocks mined while clients train are empty; leave room for them.
    const std::size_t shard = (cfg.task.train_samples + cfg.clients - 1) / cfg.clients;
    const double train_time =
        training_duration(shard, cfg.epochs, cfg.compute_power, TrainingCostModel{cfg.instructions_per_sample_epoch});
    cfg.stop_depth = static_cast<std::uint32_t>(rounds * (2 + 4 * std::ceil(train_time / cfg.block_interval)));

    Simulation sim(cfg, false);
    const auto trajectory = reference_fedavg(sim.bundle(), sim.genesis_model(), sim.client_sgd(0), rounds, cfg.seed);
    sim.run();
    std::vector<const Block*> filled;
    for (BlockId id : main_chain(sim.views(), sim.blocks())) {
        const Block& b = sim.blocks().get(id);
        if (!b.empty()) filled.push_back(&b);
    }

    OracleResult result;
    result.rounds = rounds;
    result.simulated_blocks = filled.size();
    for (std::size_t t = 0; t < trajectory.size(); ++t) {
        OracleRound row;
        row.round = t;
        row.reference_test_acc = evaluate_accuracy(sim.task(), trajectory[t], sim.task().test());
        const ModelParams* simulated =
            t == 0 ? &sim.genesis_model() : (t <= filled.size() ? filled[t - 1]->model.get() : nullptr);
        if (simulated) {
            row.simulated_test_acc = evaluate_accuracy(sim.task(), *simulated, sim.task().test());
            row.relative_diff = simulated->relative_diff(trajectory[t]);
            result.max_relative_diff = std::max(result.max_relative_diff, *row.relative_diff);
        }
        result.rows.push_back(row);
    }
    return result;
}

void write_oracle_csv(std::ostream& out, const OracleResult& result) {
    out << "round,test_acc,simulated_test_acc,relative_diff\n";
    for (const auto& row : result.rows) {
        out << row.round << ',' << format_number(row.reference_test_acc) << ',';
        if (row.simulated_test_acc) out << format_number(*row.simulated_test_acc) << ',' << format_number(*row.relative_diff);
        else out << ',';
        out << '\n';
    }
}

}  // namespace flchain
