#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "flchain/config/scenario.hpp"

namespace flchain {

struct OracleRound {
    std::size_t round = 0;
    double reference_test_acc = 0.0;
    std::optional<double> simulated_test_acc;  // absent when the chain has fewer filled blocks
    std::optional<double> relative_diff;
};

struct OracleResult {
    std::size_t rounds = 0;
    std::size_t simulated_blocks = 0;  // non-empty main-chain blocks
    double max_relative_diff = 0.0;
    std::vector<OracleRound> rows;     // round 0 is the genesis model

    bool matches(double tolerance) const { return simulated_blocks >= rounds && max_relative_diff <= tolerance; }
};

/// Runs `config` in degenerate mode and compares the first `rounds`
/// non-empty main-chain blocks with synchronous FedAvg from the same genesis.
/// The stop depth is raised to leave room for blocks mined during training.
OracleResult run_oracle(ScenarioConfig config, std::size_t rounds);

/// round,test_acc,simulated_test_acc,relative_diff
void write_oracle_csv(std::ostream& out, const OracleResult& result);

}  // namespace flchain
