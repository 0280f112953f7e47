#pragma once

#include <cstdint>
#include <string_view>

#include "flchain/engine/sim_time.hpp"

namespace flchain {

enum class EventKind : std::uint8_t {
    TxGenerated,
    TxDelivered,
    BlockMined,
    BlockDelivered,
    ClientTrainingDone,
    ClientStepStart,
    SimulationDrainDeadline,
};

std::string_view to_string(EventKind kind);

/// A scheduled occurrence. `target` is the node the event is addressed to
/// (miner index for deliveries and mining, client index for client events);
/// `payload` is the id of the transaction/block/pulled-block it carries.
struct Event {
    SimTime fire_at;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::TxGenerated;
    std::uint32_t target = 0;
    std::uint64_t payload = 0;
};

/// Strict total order on (fire_at, seq); used to build a min-heap.
struct EventLater {
    bool operator()(const Event& a, const Event& b) const {
        if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
        return a.seq > b.seq;
    }
};

}  // namespace flchain
