#include "flchain/chain/chain_view.hpp"

#include <algorithm>
#include <stdexcept>

namespace flchain {

ChainView::ChainView(std::uint32_t owner, const BlockStore& blocks) : owner_(owner), blocks_(&blocks) {
    insert_known(kGenesis);
}

bool ChainView::knows(BlockId id) const {
    const auto i = index_of(id);
    return i < block_arrival_.size() && block_arrival_[i] != 0;
}

bool ChainView::knows(TxId id) const {
    const auto i = index_of(id);
    return i < tx_state_.size() && tx_state_[i] != TxState::Unseen;
}

bool ChainView::on_chain(TxId id) const {
    const auto i = index_of(id);
    return i < tx_state_.size() && tx_state_[i] == TxState::OnChain;
}

bool ChainView::in_mempool(TxId id) const {
    const auto i = index_of(id);
    return i < tx_state_.size() && tx_state_[i] == TxState::InMempool;
}

std::size_t ChainView::orphan_count() const {
    std::size_t n = 0;
    for (const auto& [parent, kids] : orphans_) n += kids.size();
    return n;
}

void ChainView::ensure_tx(TxId id) {
    const auto i = index_of(id);
    if (i >= tx_state_.size()) {
        const std::size_t n = std::max<std::size_t>(i + 1, tx_state_.size() * 2);
        tx_state_.resize(n, TxState::Unseen);
        tx_pos_.resize(n, 0);
    }
}

void ChainView::set_state(TxId id, TxState state) {
    auto& s = tx_state_[index_of(id)];
    if (s == TxState::InMempool) --mempool_count_;
    if (state == TxState::InMempool) {
        ++mempool_count_;
        mempool_cursor_ = std::min<std::size_t>(mempool_cursor_, tx_pos_[index_of(id)]);
    }
    s = state;
}

void ChainView::see_tx(TxId id, TxState state) {
    ensure_tx(id);
    if (tx_state_[index_of(id)] == TxState::Unseen) {
        tx_pos_[index_of(id)] = static_cast<std::uint32_t>(arrival_order_.size());
        arrival_order_.push_back(id);
    }
    set_state(id, state);
}

bool ChainView::on_tx_arrival(TxId id) {
    if (knows(id)) return false;
    see_tx(id, TxState::InMempool);
    return true;
}

void ChainView::insert_known(BlockId id) {
    const auto i = index_of(id);
    if (i >= block_arrival_.size()) block_arrival_.resize(std::max<std::size_t>(i + 1, block_arrival_.size() * 2), 0);
    block_arrival_[i] = ++arrivals_;
    ++known_count_;
}

void ChainView::switch_head(BlockId new_head) {
    const BlockId fork = blocks_->common_ancestor(head_, new_head);
    // Abandoned branch first, so transactions present on both branches end on-chain.
    for (BlockId cur = head_; cur != fork; cur = *blocks_->get(cur).parent) {
        for (TxId tx : blocks_->get(cur).txs) see_tx(tx, TxState::InMempool);
    }
    for (BlockId cur = new_head; cur != fork; cur = *blocks_->get(cur).parent) {
        for (TxId tx : blocks_->get(cur).txs) see_tx(tx, TxState::OnChain);
    }
    head_ = new_head;
}

ArrivalResult ChainView::on_block_arrival(BlockId id, SimTime /*at*/) {
    ArrivalResult result;
    result.old_head = head_;
    result.new_head = head_;
    if (knows(id)) {
        result.outcome = ArrivalOutcome::Duplicate;
        return result;
    }
    const Block& block = blocks_->get(id);
    if (!knows(*block.parent)) {
        auto& waiting = orphans_[*block.parent];
        if (std::find(waiting.begin(), waiting.end(), id) == waiting.end()) waiting.push_back(id);
        result.outcome = ArrivalOutcome::Buffered;
        return result;
    }

    // Insert the block and any buffered descendants, breadth-first in arrival order.
    std::vector<BlockId> pending{id};
    for (std::size_t i = 0; i < pending.size(); ++i) {
        const BlockId cur = pending[i];
        if (knows(cur)) continue;
        insert_known(cur);
        const Block& b = blocks_->get(cur);
        if (b.depth != blocks_->get(*b.parent).depth + 1) throw std::logic_error("block depth invariant violated");
        // Strictly deeper only: equal depth keeps the earlier arrival.
        if (b.depth > blocks_->get(head_).depth) switch_head(cur);
        if (auto it = orphans_.find(cur); it != orphans_.end()) {
            pending.insert(pending.end(), it->second.begin(), it->second.end());
            orphans_.erase(it);
        }
    }

    result.new_head = head_;
    if (!result.head_changed()) {
        result.outcome = ArrivalOutcome::AcceptedFork;
    } else if (blocks_->get(head_).parent == result.old_head) {
        result.outcome = ArrivalOutcome::AcceptedExtendsHead;
    } else if (blocks_->is_ancestor(result.old_head, head_)) {
        result.outcome = ArrivalOutcome::AcceptedExtendsHead;  // extended through buffered descendants
    } else {
        result.outcome = ArrivalOutcome::SwitchedChains;
    }
    return result;
}

std::vector<TxId> ChainView::oldest_mempool(std::size_t max) {
    std::vector<TxId> out;
    while (mempool_cursor_ < arrival_order_.size() && !in_mempool(arrival_order_[mempool_cursor_])) ++mempool_cursor_;
    for (std::size_t i = mempool_cursor_; i < arrival_order_.size() && out.size() < max; ++i) {
        if (in_mempool(arrival_order_[i])) out.push_back(arrival_order_[i]);
    }
    return out;
}

std::vector<TxId> ChainView::mempool() const {
    std::vector<TxId> out;
    for (std::size_t i = mempool_cursor_; i < arrival_order_.size(); ++i) {
        if (in_mempool(arrival_order_[i])) out.push_back(arrival_order_[i]);
    }
    return out;
}

}  // namespace flchain
