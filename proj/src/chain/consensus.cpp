#include "flchain/chain/consensus.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

namespace flchain {

double mining_rate(double power, double total_power, double block_interval) {
    if (!(power > 0.0) || !(total_power > 0.0) || power > total_power * (1.0 + 1e-12)) {
        throw std::invalid_argument("mining_rate: need 0 < power <= total_power");
    }
    if (!(block_interval > 0.0)) throw std::invalid_argument("mining_rate: block interval must be positive");
    return (power / total_power) / block_interval;
}

double analytic_fork_probability(std::span<const double> rates, std::size_t winner, double winner_block_prop) {
    if (rates.empty()) throw std::invalid_argument("analytic_fork_probability: no miners");
    if (winner >= rates.size()) throw std::invalid_argument("analytic_fork_probability: winner out of range");
    if (winner_block_prop < 0.0) throw std::invalid_argument("analytic_fork_probability: negative propagation delay");
    double exponent = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (i != winner) exponent += rates[i] * winner_block_prop;
    }
    return -std::expm1(-exponent);
}

double analytic_fork_probability(std::span<const double> rates, double winner_block_prop) {
    if (rates.empty()) throw std::invalid_argument("analytic_fork_probability: no miners");
    double total = 0.0;
    for (double r : rates) total += r;
    double p = 0.0;
    for (std::size_t w = 0; w < rates.size(); ++w) {
        p += rates[w] / total * analytic_fork_probability(rates, w, winner_block_prop);
    }
    return p;
}

std::uint64_t start_mining(ChainView& view, double rate, SimTime at, Engine& engine, RngStream& rng) {
    if (view.mining_attempt) {
        if (view.mining_attempt->parent == view.head()) {
            throw std::logic_error("start_mining: miner " + std::to_string(view.owner()) +
                                   " already mining on its current head");
        }
        engine.cancel(view.mining_attempt->event_seq);
    }
    if (!(rate > 0.0)) throw std::invalid_argument("start_mining: rate must be positive");
    const double delay = sample_exponential(rng, 1.0 / rate);
    const std::uint64_t seq = engine.schedule(at.after(delay), EventKind::BlockMined, view.owner(), index_of(view.head()));
    view.mining_attempt = MiningAttempt{view.head(), seq};
    return seq;
}

void stop_mining(ChainView& view, Engine& engine) {
    if (view.mining_attempt) engine.cancel(view.mining_attempt->event_seq);
    view.mining_attempt.reset();
}

Block build_block(ChainView& view, const BlockStore& blocks, const TxStore& txs, std::size_t max_txs, SimTime at,
                  const Aggregator& aggregate_fn) {
    const Block& parent = blocks.get(view.head());
    Block block;
    block.parent = parent.id;
    block.depth = parent.depth + 1;
    block.miner = view.owner();
    block.ts_mined = at;
    block.txs = view.oldest_mempool(max_txs);
    if (block.txs.empty()) {
        block.model = parent.model;
        return block;
    }
    std::vector<WeightedModel> updates;
    updates.reserve(block.txs.size());
    for (TxId id : block.txs) updates.push_back({&txs.params(id), txs.get(id).n_samples});
    Aggregate agg = aggregate_fn(updates);
    block.model = std::make_shared<const ModelParams>(std::move(agg.params));
    block.total_samples = agg.total_samples;
    return block;
}

std::vector<BlockId> main_chain(std::span<const ChainView> views, const BlockStore& blocks) {
    if (views.empty()) throw std::invalid_argument("main_chain: no views");
    std::map<BlockId, std::size_t> votes;
    for (const auto& v : views) ++votes[v.head()];
    for (const auto& [head, n] : votes) {
        if (2 * n > views.size()) return blocks.path_from_genesis(head);
    }
    BlockId best = views.front().head();
    for (const auto& v : views) {
        const Block& b = blocks.get(v.head());
        const Block& cur = blocks.get(best);
        if (b.depth > cur.depth || (b.depth == cur.depth && b.ts_mined < cur.ts_mined)) best = b.id;
    }
    return blocks.path_from_genesis(best);
}

}  // namespace flchain
