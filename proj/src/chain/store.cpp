#include "flchain/chain/store.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace flchain {

BlockStore::BlockStore(ModelParams genesis_model) {
    Block g;
    g.id = kGenesis;
    g.model = std::make_shared<const ModelParams>(std::move(genesis_model));
    blocks_.push_back(std::move(g));
}

BlockId BlockStore::add(Block block) {
    if (!block.parent) throw std::invalid_argument("BlockStore::add: only genesis may lack a parent");
    const Block& parent = get(*block.parent);
    if (block.depth != parent.depth + 1) {
        throw std::logic_error("BlockStore::add: depth " + std::to_string(block.depth) + " does not follow parent depth " +
                               std::to_string(parent.depth));
    }
    if (!block.model) throw std::invalid_argument("BlockStore::add: block without model");
    block.id = BlockId{static_cast<std::uint32_t>(blocks_.size())};
    blocks_.push_back(std::move(block));
    return blocks_.back().id;
}

bool BlockStore::is_ancestor(BlockId ancestor, BlockId descendant) const {
    const std::uint32_t target_depth = get(ancestor).depth;
    BlockId cur = descendant;
    while (get(cur).depth > target_depth) cur = *get(cur).parent;
    return cur == ancestor;
}

BlockId BlockStore::common_ancestor(BlockId a, BlockId b) const {
    while (get(a).depth > get(b).depth) a = *get(a).parent;
    while (get(b).depth > get(a).depth) b = *get(b).parent;
    while (a != b) {
        a = *get(a).parent;
        b = *get(b).parent;
    }
    return a;
}

std::vector<BlockId> BlockStore::path_from_genesis(BlockId tip) const {
    std::vector<BlockId> path;
    path.reserve(get(tip).depth + 1);
    for (BlockId cur = tip;; cur = *get(cur).parent) {
        path.push_back(cur);
        if (!get(cur).parent) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

TxId TxStore::add(Transaction tx) {
    tx.id = TxId{static_cast<std::uint32_t>(txs_.size())};
    txs_.push_back(tx);
    params_.emplace_back();
    return tx.id;
}

TxId TxStore::add(Transaction tx, ModelParams params) {
    const TxId id = add(tx);
    params_.back() = std::move(params);
    return id;
}

const ModelParams& TxStore::params(TxId id) const {
    auto& slot = params_.at(index_of(id));
    if (!slot) {
        if (!materializer_) throw std::logic_error("TxStore: transaction has no parameters and no materializer");
        slot = materializer_(get(id));
    }
    return *slot;
}

}  // namespace flchain
