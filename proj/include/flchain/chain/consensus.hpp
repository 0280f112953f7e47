#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "flchain/chain/chain_view.hpp"
#include "flchain/chain/store.hpp"
#include "flchain/engine/engine.hpp"
#include "flchain/engine/rng.hpp"
#include "flchain/fl/training.hpp"

namespace flchain {

/// Per-miner block rate lambda_m = (xi_m / xi_total) / BI.
double mining_rate(double power, double total_power, double block_interval);

/// 1 - prod_{i != winner} exp(-rate_i * winner_block_prop).
double analytic_fork_probability(std::span<const double> rates, std::size_t winner, double winner_block_prop);
/// Same, averaged over the winner (miner w wins with probability rate_w / sum).
/// For equal rates this is 1 - exp(-rate (M-1) T_bp).
double analytic_fork_probability(std::span<const double> rates, double winner_block_prop);

/// Samples a block-generation time ~ Exp(mean 1/rate) and schedules
/// BlockMined(owner) for the view's current head. An attempt on a stale head
/// is cancelled first; a second start on the same head throws.
std::uint64_t start_mining(ChainView& view, double rate, SimTime at, Engine& engine, RngStream& rng);
/// Cancels the active attempt, if any.
void stop_mining(ChainView& view, Engine& engine);

using Aggregator = std::function<Aggregate(std::span<const WeightedModel>)>;

/// Assembles (does not store) the next block on the view's head: up to
/// `max_txs` oldest mempool transactions aggregated with `aggregate`; an
/// empty mempool yields an empty block carrying the parent's model.
Block build_block(ChainView& view, const BlockStore& blocks, const TxStore& txs, std::size_t max_txs, SimTime at,
                  const Aggregator& aggregate_fn);

/// Genesis -> tip path of the chain adopted by a strict majority of views;
/// without a majority, the deepest head (earliest ts_mined on ties).
std::vector<BlockId> main_chain(std::span<const ChainView> views, const BlockStore& blocks);

}  // namespace flchain
