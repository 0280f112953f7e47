#include "flchain/engine/engine.hpp"

#include <string>

namespace flchain {

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::TxGenerated: return "TxGenerated";
        case EventKind::TxDelivered: return "TxDelivered";
        case EventKind::BlockMined: return "BlockMined";
        case EventKind::BlockDelivered: return "BlockDelivered";
        case EventKind::ClientTrainingDone: return "ClientTrainingDone";
        case EventKind::ClientStepStart: return "ClientStepStart";
        case EventKind::SimulationDrainDeadline: return "SimulationDrainDeadline";
    }
    return "Unknown";
}

std::uint64_t Engine::schedule(SimTime at, EventKind kind, std::uint32_t target, std::uint64_t payload) {
    if (at < clock_) {
        throw CausalityError("event " + std::string(to_string(kind)) + " scheduled at t=" +
                             std::to_string(at.seconds) + " before clock t=" + std::to_string(clock_.seconds));
    }
    const std::uint64_t seq = next_seq_++;
    queue_.push(Event{at, seq, kind, target, payload});
    live_.insert(seq);
    return seq;
}

bool Engine::cancel(std::uint64_t seq) { return live_.erase(seq) > 0; }

std::optional<Event> Engine::pop() {
    while (!queue_.empty()) {
        Event ev = queue_.top();
        queue_.pop();
        if (live_.erase(ev.seq) == 0) continue;  // cancelled
        clock_ = ev.fire_at;
        ++fired_;
        if (record_trace_) trace_.push_back(ev);
        return ev;
    }
    return std::nullopt;
}

bool Engine::stop_reached(const StopCondition& stop, std::size_t fired_here) const {
    if (stop.max_events && fired_here >= *stop.max_events) return true;
    return stop.predicate && stop.predicate(*this);
}

std::size_t Engine::run_until(const StopCondition& stop, const Handler& handler) {
    std::size_t fired_here = 0;
    while (!stop_reached(stop, fired_here)) {
        auto ev = pop();
        if (!ev) {
            throw StarvationError("event queue drained at t=" + std::to_string(clock_.seconds) +
                                  " before the stop condition was reached");
        }
        ++fired_here;
        if (handler) handler(*ev);
    }
    return fired_here;
}

}  // namespace flchain
