#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "flchain/engine/event.hpp"

namespace flchain {

using EventTrace = std::vector<Event>;

/// One line per event: `<time> <seq> <kind>(<target>) <payload>`.
/// Times are printed with 17 significant digits so a trace round-trips.
std::string format_trace_line(const Event& event);
void write_trace(std::ostream& out, const EventTrace& trace);
std::string trace_to_string(const EventTrace& trace);
EventTrace read_trace(std::istream& in);

}  // namespace flchain
