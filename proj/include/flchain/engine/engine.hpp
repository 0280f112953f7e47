#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "flchain/engine/event.hpp"
#include "flchain/engine/trace.hpp"

namespace flchain {

/// Raised when an event is scheduled in the past of the simulation clock.
class CausalityError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised when the queue runs dry before the stop condition holds.
class StarvationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Engine;

struct StopCondition {
    std::optional<std::size_t> max_events;
    std::function<bool(const Engine&)> predicate;

    static StopCondition after_events(std::size_t n) { return {n, {}}; }
    static StopCondition when(std::function<bool(const Engine&)> p) { return {std::nullopt, std::move(p)}; }
};

/// Sequential discrete-event loop. Events fire in (fire_at, seq) order;
/// `seq` is assigned at scheduling time so ties resolve by insertion order.
class Engine {
public:
    using Handler = std::function<void(const Event&)>;

    explicit Engine(bool record_trace = true) : record_trace_(record_trace) {}

    SimTime now() const { return clock_; }

    std::uint64_t schedule(SimTime at, EventKind kind, std::uint32_t target = 0, std::uint64_t payload = 0);
    /// Removes a pending event; cancelled events never fire nor enter the trace.
    /// Returns false if `seq` is not pending (already fired or cancelled).
    bool cancel(std::uint64_t seq);

    /// Pops the next live event, advances the clock and records it.
    std::optional<Event> pop();

    /// Fires events through `handler` until `stop` holds (checked before the
    /// first pop and after every fired event). Throws StarvationError if the
    /// queue empties first.
    std::size_t run_until(const StopCondition& stop, const Handler& handler);

    std::size_t pending() const { return live_.size(); }
    bool empty() const { return pending() == 0; }
    std::size_t fired() const { return fired_; }

    const EventTrace& trace() const { return trace_; }
    EventTrace take_trace() { return std::move(trace_); }

private:
    bool stop_reached(const StopCondition& stop, std::size_t fired_here) const;

    SimTime clock_{};
    std::uint64_t next_seq_ = 1;
    std::size_t fired_ = 0;
    bool record_trace_;
    std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
    std::unordered_set<std::uint64_t> live_;
    EventTrace trace_;
};

}  // namespace flchain
