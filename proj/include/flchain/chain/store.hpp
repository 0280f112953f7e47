#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "flchain/engine/sim_time.hpp"
#include "flchain/fl/model.hpp"

namespace flchain {

enum class BlockId : std::uint32_t {};
enum class TxId : std::uint32_t {};

constexpr std::uint32_t index_of(BlockId id) { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t index_of(TxId id) { return static_cast<std::uint32_t>(id); }

inline constexpr BlockId kGenesis{0};
inline constexpr std::uint32_t kNoMiner = std::numeric_limits<std::uint32_t>::max();

/// One client's local model update. Parameters live in the TxStore.
struct Transaction {
    TxId id{};
    std::uint32_t client = 0;
    std::uint32_t origin_miner = 0;  // miner the client uploaded to
    std::size_t n_samples = 0;       // D^(k)
    SimTime ts_generated;            // training finished
    SimTime pulled_at;               // when the parent model was read
    BlockId parent_block{};          // lineage: model the update started from
    std::uint64_t step = 0;          // client-local training counter
};

struct Block {
    BlockId id{};
    std::optional<BlockId> parent;  // none for genesis
    std::uint32_t depth = 0;
    std::uint32_t miner = kNoMiner;
    SimTime ts_mined;
    std::vector<TxId> txs;
    std::shared_ptr<const ModelParams> model;  // w^(b)
    std::size_t total_samples = 0;              // D^(b)

    bool empty() const { return txs.empty(); }
};

/// Global immutable block storage. Nodes keep their own view of which
/// blocks they know; the contents are shared.
class BlockStore {
public:
    explicit BlockStore(ModelParams genesis_model);

    BlockId add(Block block);  // assigns the id; checks depth = parent.depth + 1
    const Block& get(BlockId id) const { return blocks_.at(index_of(id)); }
    std::size_t size() const { return blocks_.size(); }
    const std::vector<Block>& all() const { return blocks_; }

    /// True if `ancestor` lies on the path from `descendant` to genesis
    /// (a block is its own ancestor).
    bool is_ancestor(BlockId ancestor, BlockId descendant) const;
    BlockId common_ancestor(BlockId a, BlockId b) const;
    /// genesis -> tip, inclusive.
    std::vector<BlockId> path_from_genesis(BlockId tip) const;

private:
    std::vector<Block> blocks_;
};

/// Transaction storage with lazily materialized parameters: a local update
/// is a deterministic function of (parent model, client shard, client step),
/// so it is only computed when a block includes it.
class TxStore {
public:
    using Materializer = std::function<ModelParams(const Transaction&)>;

    TxStore() = default;
    explicit TxStore(Materializer materializer) : materializer_(std::move(materializer)) {}

    TxId add(Transaction tx);
    /// Registers a transaction with known parameters.
    TxId add(Transaction tx, ModelParams params);
    const Transaction& get(TxId id) const { return txs_.at(index_of(id)); }
    const ModelParams& params(TxId id) const;
    bool materialized(TxId id) const { return params_.at(index_of(id)).has_value(); }
    std::size_t size() const { return txs_.size(); }

private:
    Materializer materializer_;
    std::vector<Transaction> txs_;
    mutable std::vector<std::optional<ModelParams>> params_;
};

}  // namespace flchain
