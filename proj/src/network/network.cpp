#include "flchain/network/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace flchain {

LinkSpec::LinkSpec(double capacity_bps) : capacity_(capacity_bps) {
    if (!(capacity_bps > 0.0) || !std::isfinite(capacity_bps)) {
        throw std::invalid_argument("link capacity must be positive, got " + std::to_string(capacity_bps));
    }
}

SizeModel SizeModel::for_model(std::size_t model_params, double header_bits) {
    return SizeModel{static_cast<double>(model_params) * kBitsPerParam, header_bits};
}

double transaction_prop_mean(const SizeModel& sizes, const LinkSpec& link) { return sizes.tx_bits / link.capacity(); }

double block_prop_mean(const SizeModel& sizes, std::size_t payload_models, const LinkSpec& link) {
    return (sizes.header_bits + static_cast<double>(payload_models) * sizes.tx_bits) / link.capacity();
}

std::vector<std::uint32_t> Topology::clients_of(std::uint32_t miner) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = 0; c < attachment.size(); ++c) {
        if (attachment[c] == miner) out.push_back(c);
    }
    return out;
}

Topology Topology::make(std::uint32_t miners, std::uint32_t clients, AttachmentPolicy policy, RngStream& rng) {
    if (miners == 0) throw std::invalid_argument("topology needs at least one miner");
    Topology t;
    t.miners = miners;
    t.attachment.resize(clients);
    for (std::uint32_t c = 0; c < clients; ++c) {
        t.attachment[c] = policy == AttachmentPolicy::RoundRobin ? c % miners
                                                                 : static_cast<std::uint32_t>(rng.uniform_index(miners));
    }
    return t;
}

Network::Network(Topology topology, NetworkParams params, RngStream propagation, RngStream client_link)
    : topology_(std::move(topology)),
      params_(params),
      miner_link_(params.miner_link_bps),
      client_link_(params.client_link_bps),
      tx_mean_(transaction_prop_mean(params.sizes, miner_link_)),
      client_tx_mean_(transaction_prop_mean(params.sizes, client_link_)),
      propagation_(std::move(propagation)),
      client_rng_(std::move(client_link)) {}

double Network::block_mean(std::size_t payload_models) const {
    return block_prop_mean(params_.sizes, payload_models, miner_link_);
}

double Network::draw(RngStream& stream, double mean) {
    if (params_.zero_delays || mean <= 0.0) return 0.0;
    return sample_exponential(stream, mean);
}

std::vector<std::uint64_t> Network::broadcast(NodeId origin, const Message& message, SimTime at, Engine& engine) {
    if (origin.kind != NodeKind::Miner || origin.index >= topology_.miners) {
        throw std::invalid_argument("broadcast from unknown miner " + std::to_string(origin.index));
    }
    const bool is_block = message.kind == Message::Kind::Block;
    const double mean = is_block ? block_mean(message.payload_models) : tx_mean_;
    const EventKind kind = is_block ? EventKind::BlockDelivered : EventKind::TxDelivered;
    std::vector<std::uint64_t> seqs;
    seqs.reserve(topology_.miners - 1);
    for (std::uint32_t m = 0; m < topology_.miners; ++m) {
        if (m == origin.index) continue;
        seqs.push_back(engine.schedule(at.after(draw(propagation_, mean)), kind, m, message.id));
    }
    return seqs;
}

std::uint64_t Network::upload(std::uint32_t client, std::uint64_t tx_id, SimTime at, Engine& engine) {
    if (client >= topology_.clients()) throw std::invalid_argument("upload from unknown client " + std::to_string(client));
    return engine.schedule(at.after(draw(client_rng_, client_tx_mean_)), EventKind::TxDelivered,
                           topology_.attachment[client], tx_id);
}

double Network::pull_delay() { return draw(client_rng_, client_tx_mean_); }

}  // namespace flchain
