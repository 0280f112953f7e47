#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "flchain/engine/engine.hpp"
#include "flchain/engine/rng.hpp"

namespace flchain {

enum class NodeKind : std::uint8_t { Miner, Client };

struct NodeId {
    std::uint32_t index = 0;
    NodeKind kind = NodeKind::Miner;

    static constexpr NodeId miner(std::uint32_t i) { return {i, NodeKind::Miner}; }
    static constexpr NodeId client(std::uint32_t i) { return {i, NodeKind::Client}; }
    friend constexpr bool operator==(NodeId, NodeId) = default;
};

/// Link capacity in bits per second; rejects non-positive capacity.
class LinkSpec {
public:
    explicit LinkSpec(double capacity_bps);
    double capacity() const { return capacity_; }

private:
    double capacity_;
};

/// Message sizes in bits.
struct SizeModel {
    double tx_bits = 0.0;      // L_t
    double header_bits = 0.0;  // L_bh

    /// L_t = parameter count x 32 bits (float32 parameters).
    static SizeModel for_model(std::size_t model_params, double header_bits);
    static constexpr double kBitsPerParam = 32.0;
};

/// Mean one-hop transaction delay L_t / C.
double transaction_prop_mean(const SizeModel& sizes, const LinkSpec& link);
/// Mean one-hop block delay (L_bh + payload_models * L_t) / C. Non-empty
/// blocks carry exactly one (aggregated) model.
double block_prop_mean(const SizeModel& sizes, std::size_t payload_models, const LinkSpec& link);

enum class AttachmentPolicy : std::uint8_t { Random, RoundRobin };

/// Complete miner overlay plus a fixed client -> miner attachment.
struct Topology {
    std::uint32_t miners = 0;
    std::vector<std::uint32_t> attachment;  // indexed by client

    std::uint32_t clients() const { return static_cast<std::uint32_t>(attachment.size()); }
    std::vector<std::uint32_t> clients_of(std::uint32_t miner) const;

    static Topology make(std::uint32_t miners, std::uint32_t clients, AttachmentPolicy policy, RngStream& rng);
};

struct Message {
    enum class Kind : std::uint8_t { Tx, Block };
    Kind kind = Kind::Tx;
    std::uint64_t id = 0;
    std::size_t payload_models = 1;  // blocks only: 0 for empty blocks

    static Message tx(std::uint64_t id) { return {Kind::Tx, id, 0}; }
    static Message block(std::uint64_t id, std::size_t payload_models) { return {Kind::Block, id, payload_models}; }
};

struct NetworkParams {
    SizeModel sizes;
    double miner_link_bps = 1e6;   // C_link
    double client_link_bps = 1e6;  // C_client
    bool zero_delays = false;
};

/// Schedules message deliveries with exponentially distributed one-hop
/// delays whose means follow the size/capacity model.
class Network {
public:
    Network(Topology topology, NetworkParams params, RngStream propagation, RngStream client_link);

    const Topology& topology() const { return topology_; }
    const NetworkParams& params() const { return params_; }

    double tx_mean() const { return tx_mean_; }
    double client_tx_mean() const { return client_tx_mean_; }
    double block_mean(std::size_t payload_models) const;

    /// Sends `message` from miner `origin` to every other miner. Returns the
    /// sequence numbers of the scheduled delivery events.
    std::vector<std::uint64_t> broadcast(NodeId origin, const Message& message, SimTime at, Engine& engine);
    /// Client -> attached miner upload of a transaction.
    std::uint64_t upload(std::uint32_t client, std::uint64_t tx_id, SimTime at, Engine& engine);
    /// Download latency of a model pull over the client link.
    double pull_delay();

private:
    double draw(RngStream& stream, double mean);

    Topology topology_;
    NetworkParams params_;
    LinkSpec miner_link_;
    LinkSpec client_link_;
    double tx_mean_;
    double client_tx_mean_;
    RngStream propagation_;
    RngStream client_rng_;
};

}  // namespace flchain
