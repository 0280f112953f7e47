#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "flchain/chain/chain_view.hpp"
#include "flchain/chain/store.hpp"
#include "flchain/config/scenario.hpp"
#include "flchain/engine/engine.hpp"
#include "flchain/fl/task.hpp"
#include "flchain/fl/training.hpp"
#include "flchain/network/network.hpp"

namespace flchain {

/// Outcome of the post-stop drain.
struct DrainStatus {
    double stop_reached_at = 0.0;  // first time a miner's head reached N_b
    bool converged = false;        // all heads equal, nothing in flight
    bool deadline_hit = false;
    std::size_t tie_break_blocks = 0;
};

/// One blockchained-FL run. Construction builds the task, topology and
/// genesis block; run() executes the event loop through the drain phase.
///
/// Drain: once any miner's head reaches N_b, clients stop, mining stops and
/// in-flight deliveries complete. If heads still disagree, every miner mines
/// again until one block is found, which then propagates; this repeats until
/// all heads agree or the drain deadline passes.
class Simulation {
public:
    explicit Simulation(const ScenarioConfig& config, bool record_trace = true);
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    void run();

    const ScenarioConfig& config() const { return config_; }
    const TaskBundle& bundle() const { return *bundle_; }
    const LearningTask& task() const { return bundle_->task; }
    const ModelParams& genesis_model() const { return *blocks_.get(kGenesis).model; }
    const BlockStore& blocks() const { return blocks_; }
    const TxStore& txs() const { return txs_; }
    const std::vector<ChainView>& views() const { return views_; }
    const Topology& topology() const { return network_->topology(); }
    const Network& network() const { return *network_; }
    const Engine& engine() const { return engine_; }
    const EventTrace& trace() const { return engine_.trace(); }
    const DrainStatus& drain() const { return drain_; }
    double end_time() const { return engine_.now().seconds; }
    std::size_t in_flight() const { return in_flight_; }
    /// Mining rate lambda_m of every miner.
    const std::vector<double>& rates() const { return rates_; }
    /// Local training wall time of each client.
    double client_training_time(std::uint32_t client) const { return clients_.at(client).training_time; }
    SgdParams client_sgd(std::uint32_t client) const;

private:
    enum class Phase : std::uint8_t { Running, Draining, Done };

    struct ClientState {
        std::uint32_t miner = 0;
        std::uint64_t step = 0;
        std::uint64_t pending_seq = 0;  // 0 = none
        BlockId pulled{};
        SimTime pulled_at;
        std::optional<TxId> awaiting;  // AwaitInclusion: last submitted tx
        double training_time = 0.0;
    };

    void handle(const Event& ev);
    void begin_step(std::uint32_t client);
    void on_training_done(std::uint32_t client, BlockId pulled);
    void on_tx_generated(std::uint32_t client, TxId tx);
    void on_tx_delivered(std::uint32_t miner, TxId tx);
    void on_block_mined(std::uint32_t miner);
    void on_block_delivered(std::uint32_t miner, BlockId block);
    void on_head_changed(std::uint32_t miner);
    void schedule_next_step(std::uint32_t client);
    void enter_drain();
    void check_drain();
    bool heads_agree() const;

    ScenarioConfig config_;
    std::shared_ptr<const TaskBundle> bundle_;
    Engine engine_;
    std::unique_ptr<Network> network_;
    BlockStore blocks_;
    TxStore txs_;
    std::vector<ChainView> views_;
    std::vector<ClientState> clients_;
    std::vector<double> rates_;
    std::vector<RngStream> mining_rng_;
    std::vector<std::vector<std::uint32_t>> clients_of_;
    std::size_t in_flight_ = 0;
    std::size_t blocks_in_flight_ = 0;
    std::uint64_t deadline_seq_ = 0;
    Phase phase_ = Phase::Running;
    DrainStatus drain_;
};

}  // namespace flchain
