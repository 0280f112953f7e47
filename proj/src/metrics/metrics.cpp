#include "flchain/metrics/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "flchain/chain/consensus.hpp"
#include "flchain/simulation.hpp"

namespace flchain {

double throughput(const BlockStore& blocks, std::span<const BlockId> main_chain, double total_time) {
    if (!(total_time > 0.0)) throw std::invalid_argument("throughput: total time must be positive");
    std::size_t n = 0;
    for (BlockId id : main_chain) n += blocks.get(id).txs.size();
    return static_cast<double>(n) / total_time;
}

std::optional<double> block_staleness(const Block& block, const TxStore& txs) {
    if (block.empty()) return std::nullopt;
    double sum = 0.0;
    for (TxId id : block.txs) sum += block.ts_mined.since(txs.get(id).ts_generated);
    return sum / static_cast<double>(block.txs.size());
}

double empirical_fork_rate(const BlockStore& blocks, std::span<const BlockId> main_chain) {
    const std::size_t mined = blocks.size() - 1;
    if (mined == 0) throw std::invalid_argument("empirical_fork_rate: no mined blocks");
    std::size_t on_chain = 0;
    for (BlockId id : main_chain) {
        if (id != kGenesis) ++on_chain;
    }
    return static_cast<double>(mined - on_chain) / static_cast<double>(mined);
}

std::optional<BlockAccuracy> per_block_accuracy(const Block& block, const TxStore& txs, const TaskBundle& bundle) {
    if (block.empty()) return std::nullopt;
    std::vector<std::uint32_t> contributors;
    for (TxId id : block.txs) contributors.push_back(txs.get(id).client);
    std::sort(contributors.begin(), contributors.end());
    contributors.erase(std::unique(contributors.begin(), contributors.end()), contributors.end());
    std::vector<std::size_t> rows;
    for (std::uint32_t k : contributors) {
        const auto& shard = bundle.shards.at(k).rows;
        rows.insert(rows.end(), shard.begin(), shard.end());
    }
    BlockAccuracy acc;
    acc.train = evaluate_accuracy(bundle.task, *block.model, bundle.task.train(), rows);
    acc.val = bundle.task.validation().size() > 0 ? evaluate_accuracy(bundle.task, *block.model, bundle.task.validation())
                                                   : acc.train;
    return acc;
}

double final_test_accuracy(const BlockStore& blocks, std::span<const BlockId> main_chain, const LearningTask& task) {
    if (main_chain.empty()) throw std::invalid_argument("final_test_accuracy: empty main chain");
    const Dataset& data = task.test().size() > 0 ? task.test() : task.train();
    return evaluate_accuracy(task, *blocks.get(main_chain.back()).model, data);
}

RunReport make_report(const Simulation& sim) {
    const auto& cfg = sim.config();
    const BlockStore& blocks = sim.blocks();
    RunReport r;
    r.main_chain = main_chain(sim.views(), blocks);
    r.t_sim_total = sim.end_time();
    r.throughput_tps = r.t_sim_total > 0.0 ? throughput(blocks, r.main_chain, r.t_sim_total) : 0.0;
    r.empirical_fork_rate = blocks.size() > 1 ? empirical_fork_rate(blocks, r.main_chain) : 0.0;

    const double t_bp = sim.network().block_mean(1);
    r.analytic_fork_prob_per_miner_mu = analytic_fork_probability(sim.rates(), t_bp);
    const std::vector<double> aggregate_mu(cfg.miners, 1.0 / cfg.block_interval);
    r.analytic_fork_prob_aggregate_mu = analytic_fork_probability(aggregate_mu, t_bp);

    r.final_test_acc = final_test_accuracy(blocks, r.main_chain, sim.task());
    r.seed = cfg.seed;
    r.config_hash = config_hash(cfg);

    std::unordered_set<std::uint32_t> on_main;
    for (BlockId id : r.main_chain) on_main.insert(index_of(id));
    for (const Block& b : blocks.all()) {
        if (b.id == kGenesis) continue;
        BlockRow row;
        row.id = b.id;
        row.parent = b.parent;
        row.depth = b.depth;
        row.miner = b.miner;
        row.ts_mined = b.ts_mined.seconds;
        row.n_txs = b.txs.size();
        row.total_samples = b.total_samples;
        row.on_main_chain = on_main.contains(index_of(b.id));
        row.staleness = block_staleness(b, sim.txs());
        if (auto acc = per_block_accuracy(b, sim.txs(), sim.bundle())) {
            row.train_acc = acc->train;
            row.val_acc = acc->val;
        }
        r.per_block.push_back(row);
    }
    return r;
}

}  // namespace flchain
