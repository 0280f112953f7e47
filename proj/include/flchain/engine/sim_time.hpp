#pragma once

#include <compare>

namespace flchain {

/// Point on the simulation clock, in seconds since the start of a run.
struct SimTime {
    double seconds = 0.0;

    constexpr SimTime() = default;
    constexpr explicit SimTime(double s) : seconds(s) {}

    constexpr SimTime after(double delta) const { return SimTime{seconds + delta}; }
    constexpr double since(SimTime earlier) const { return seconds - earlier.seconds; }

    friend constexpr auto operator<=>(SimTime, SimTime) = default;
};

}  // namespace flchain
