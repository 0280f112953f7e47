#include "flchain/engine/trace.hpp"

#include <array>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace flchain {

namespace {

char payload_prefix(EventKind kind) {
    switch (kind) {
        case EventKind::TxGenerated:
        case EventKind::TxDelivered: return 't';
        case EventKind::BlockMined:
        case EventKind::BlockDelivered:
        case EventKind::ClientTrainingDone: return 'b';
        default: return '-';
    }
}

char target_prefix(EventKind kind) {
    switch (kind) {
        case EventKind::TxGenerated:
        case EventKind::ClientTrainingDone:
        case EventKind::ClientStepStart: return 'c';
        case EventKind::SimulationDrainDeadline: return '-';
        default: return 'm';
    }
}

EventKind parse_kind(std::string_view name) {
    for (auto k : {EventKind::TxGenerated, EventKind::TxDelivered, EventKind::BlockMined,
                   EventKind::BlockDelivered, EventKind::ClientTrainingDone, EventKind::ClientStepStart,
                   EventKind::SimulationDrainDeadline}) {
        if (to_string(k) == name) return k;
    }
    throw std::runtime_error("unknown event kind in trace: " + std::string(name));
}

}  // namespace

std::string format_trace_line(const Event& ev) {
    std::array<char, 160> buf{};
    const char tp = target_prefix(ev.kind);
    const char pp = payload_prefix(ev.kind);
    const auto name = to_string(ev.kind);
    int n = 0;
    if (tp == '-') {
        n = std::snprintf(buf.data(), buf.size(), "%.17g %llu %.*s(-) -", ev.fire_at.seconds,
                          static_cast<unsigned long long>(ev.seq), static_cast<int>(name.size()), name.data());
    } else if (pp == '-') {
        n = std::snprintf(buf.data(), buf.size(), "%.17g %llu %.*s(%c%u) -", ev.fire_at.seconds,
                          static_cast<unsigned long long>(ev.seq), static_cast<int>(name.size()), name.data(), tp,
                          ev.target);
    } else {
        n = std::snprintf(buf.data(), buf.size(), "%.17g %llu %.*s(%c%u) %c%llu", ev.fire_at.seconds,
                          static_cast<unsigned long long>(ev.seq), static_cast<int>(name.size()), name.data(), tp,
                          ev.target, pp, static_cast<unsigned long long>(ev.payload));
    }
    return std::string(buf.data(), static_cast<std::size_t>(n));
}

void write_trace(std::ostream& out, const EventTrace& trace) {
    for (const auto& ev : trace) out << format_trace_line(ev) << '\n';
}

std::string trace_to_string(const EventTrace& trace) {
    std::ostringstream os;
    write_trace(os, trace);
    return os.str();
}

EventTrace read_trace(std::istream& in) {
    EventTrace trace;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string time_s, seq_s, kind_s, payload_s;
        if (!(ls >> time_s >> seq_s >> kind_s >> payload_s)) {
            throw std::runtime_error("malformed trace line: " + line);
        }
        Event ev;
        ev.fire_at = SimTime{std::stod(time_s)};
        ev.seq = std::stoull(seq_s);
        const auto open = kind_s.find('(');
        const auto close = kind_s.find(')');
        if (open == std::string::npos || close == std::string::npos || close < open + 2) {
            throw std::runtime_error("malformed trace kind: " + kind_s);
        }
        ev.kind = parse_kind(std::string_view(kind_s).substr(0, open));
        ev.target = close == open + 2 ? std::numeric_limits<std::uint32_t>::max()
                                      : static_cast<std::uint32_t>(std::stoul(kind_s.substr(open + 2, close - open - 2)));
        ev.payload = payload_s == "-" ? 0 : std::stoull(payload_s.substr(1));
        trace.push_back(ev);
    }
    return trace;
}

}  // namespace flchain
