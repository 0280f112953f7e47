#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flchain/chain/store.hpp"
#include "flchain/fl/task.hpp"

namespace flchain {

class Simulation;

/// Sum of transactions in main-chain blocks per second of simulated time.
double throughput(const BlockStore& blocks, std::span<const BlockId> main_chain, double total_time);

/// Mean of (TS_bm - TS_tg) over a block's transactions; absent for an empty block.
std::optional<double> block_staleness(const Block& block, const TxStore& txs);

/// Mined blocks off the main chain over all mined blocks (genesis excluded).
double empirical_fork_rate(const BlockStore& blocks, std::span<const BlockId> main_chain);

struct BlockAccuracy {
    double train = 0.0;  // on the union of the contributing clients' shards
    double val = 0.0;    // on the shared validation split
};
/// Absent for an empty block.
std::optional<BlockAccuracy> per_block_accuracy(const Block& block, const TxStore& txs, const TaskBundle& bundle);

/// Test accuracy of the main-chain tip's model.
double final_test_accuracy(const BlockStore& blocks, std::span<const BlockId> main_chain, const LearningTask& task);

struct BlockRow {
    BlockId id{};
    std::optional<BlockId> parent;
    std::uint32_t depth = 0;
    std::uint32_t miner = 0;
    double ts_mined = 0.0;
    std::size_t n_txs = 0;
    std::size_t total_samples = 0;
    bool on_main_chain = false;
    std::optional<double> staleness;
    std::optional<double> train_acc;
    std::optional<double> val_acc;
};

struct RunReport {
    double throughput_tps = 0.0;
    double empirical_fork_rate = 0.0;
    double analytic_fork_prob_per_miner_mu = 0.0;  // mu = lambda_m of each competing miner
    double analytic_fork_prob_aggregate_mu = 0.0;  // mu = 1 / BI
    double final_test_acc = 0.0;
    double t_sim_total = 0.0;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::vector<BlockRow> per_block;  // every mined block, in mining order
    std::vector<BlockId> main_chain;  // genesis -> tip
};

RunReport make_report(const Simulation& sim);

}  // namespace flchain
