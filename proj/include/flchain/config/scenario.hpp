#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "flchain/fl/task.hpp"
#include "flchain/network/network.hpp"
#include "json.hpp"

namespace flchain {

/// Invalid configuration; the message names the offending key.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class PullPolicy : std::uint8_t {
    Continuous,      // retrain as soon as the previous update is submitted
    AwaitInclusion,  // wait until the last update is on the attached miner's chain
};

/// Full parameter set of one simulated scenario. Defaults are the middle
/// point of the canonical grid: BI = 10 s, N_t = 10, M = 10, K = 50,
/// C_link = 1 Mbps, L_bh = 20 kbit, N_b = 200, E = 5, B = 64, 900 MIPS.
struct ScenarioConfig {
    double block_interval = 10.0;        // BI [s]
    std::size_t max_txs_per_block = 10;  // N_t
    double tx_bits = 2.327e6;            // L_t [bit]; 0 = 32 bits per desk-model parameter
    double header_bits = 20e3;           // L_bh [bit]
    std::uint32_t miners = 10;           // M
    std::vector<double> miner_powers;    // xi_m; empty = equal
    double link_capacity = 1e6;          // C_link [bit/s]
    double client_capacity = 0.0;        // C_client [bit/s]; 0 = same as C_link
    std::uint32_t clients = 50;          // K
    std::size_t epochs = 5;              // E
    std::size_t batch_size = 64;         // B
    double learning_rate = 1e-2;         // eta
    double compute_power = 9e8;          // rho [instructions/s]
    double instructions_per_sample_epoch = 3.6e7;
    std::uint32_t stop_depth = 200;      // N_b
    TaskSpec task;
    double init_scale = 0.01;
    std::uint64_t seed = 0;
    double drain_deadline = 0.0;         // [s]; 0 = 10 * BI
    AttachmentPolicy attachment = AttachmentPolicy::Random;
    bool pull_model = true;              // pulls cost one transaction-sized download
    PullPolicy pull_policy = PullPolicy::Continuous;
    double client_idle_time = 0.0;       // [s] between submitting and the next pull
    double client_start_jitter = 0.0;    // [s]; first pulls uniform in [0, jitter)
    bool zero_delays = false;

    double effective_client_capacity() const { return client_capacity > 0.0 ? client_capacity : link_capacity; }
    double effective_drain_deadline() const { return drain_deadline > 0.0 ? drain_deadline : 10.0 * block_interval; }
    SizeModel size_model(std::size_t model_dim) const;
    std::vector<double> powers() const;

    /// FedAvg-equivalence mode: one miner, zero delays, N_t = K, clients
    /// synchronised on block inclusion, no jitter or idle time.
    ScenarioConfig degenerate() const;

    void validate() const;  // throws ConfigError
};

nlohmann::json to_json(const ScenarioConfig& cfg);
/// Applies `overrides` on top of `base`; rejects unknown keys, suggesting
/// the nearest known one.
ScenarioConfig parse_config(const nlohmann::json& overrides, const ScenarioConfig& base = {});
ScenarioConfig parse_config_text(const std::string& text, const ScenarioConfig& base = {});
ScenarioConfig load_config(const std::string& path, const ScenarioConfig& base = {});

/// Keys accepted by parse_config, sorted.
const std::vector<std::string>& config_keys();
std::string closest_key(const std::string& key);

/// Stable 64-bit hash (hex) of the configuration, excluding the seed.
std::string config_hash(const ScenarioConfig& cfg);
/// Canonical flat key -> text map (sorted keys), as written to index.csv.
std::vector<std::pair<std::string, std::string>> config_columns(const ScenarioConfig& cfg);

}  // namespace flchain
