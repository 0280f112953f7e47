#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "flchain/chain/store.hpp"

namespace flchain {

enum class ArrivalOutcome : std::uint8_t {
    AcceptedExtendsHead,
    AcceptedFork,
    SwitchedChains,
    Duplicate,
    Buffered,  // parent unknown; held until it arrives
};

struct ArrivalResult {
    ArrivalOutcome outcome = ArrivalOutcome::Duplicate;
    BlockId old_head{};
    BlockId new_head{};
    bool head_changed() const { return old_head != new_head; }
};

struct MiningAttempt {
    BlockId parent{};
    std::uint64_t event_seq = 0;
};

/// One miner's ledger state: known blocks, adopted head, and mempool.
///
/// Invariants: the head is a deepest known block, ties going to the one that
/// arrived first; every transaction this node has seen is either on the head
/// chain or in the mempool, never both. Mempool order is local arrival order.
class ChainView {
public:
    ChainView(std::uint32_t owner, const BlockStore& blocks);

    std::uint32_t owner() const { return owner_; }
    BlockId head() const { return head_; }
    std::uint32_t head_depth() const { return blocks_->get(head_).depth; }

    bool knows(BlockId id) const;
    bool knows(TxId id) const;
    /// Transaction is included in a block on the path genesis -> head.
    bool on_chain(TxId id) const;
    bool in_mempool(TxId id) const;
    std::size_t mempool_size() const { return mempool_count_; }
    std::size_t orphan_count() const;
    std::size_t known_blocks() const { return known_count_; }

    /// Delivers a block. Unknown-parent blocks are buffered and inserted once
    /// their parent arrives. On a head change the mempool is reconciled:
    /// transactions of the new chain leave it and those only on the
    /// abandoned branch return.
    ArrivalResult on_block_arrival(BlockId id, SimTime at);

    /// Delivers a transaction. Returns false for one already seen.
    bool on_tx_arrival(TxId id);

    /// Up to `max` mempool transactions, oldest local arrival first.
    std::vector<TxId> oldest_mempool(std::size_t max);
    std::vector<TxId> mempool() const;

    std::optional<MiningAttempt> mining_attempt;

private:
    enum class TxState : std::uint8_t { Unseen, InMempool, OnChain };

    void ensure_tx(TxId id);
    void see_tx(TxId id, TxState state);
    void set_state(TxId id, TxState state);
    void insert_known(BlockId id);
    void switch_head(BlockId new_head);

    std::uint32_t owner_;
    const BlockStore* blocks_;
    BlockId head_ = kGenesis;
    std::vector<std::uint64_t> block_arrival_;  // 0 = unknown, else arrival order + 1
    std::uint64_t arrivals_ = 0;
    std::size_t known_count_ = 0;
    std::map<BlockId, std::vector<BlockId>> orphans_;  // parent -> waiting children

    std::vector<TxState> tx_state_;
    std::vector<std::uint32_t> tx_pos_;  // index into arrival_order_
    std::vector<TxId> arrival_order_;
    std::size_t mempool_cursor_ = 0;  // no mempool entry before this position
    std::size_t mempool_count_ = 0;
};

}  // namespace flchain
