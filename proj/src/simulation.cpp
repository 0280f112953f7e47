#include "flchain/simulation.hpp"

#include <algorithm>
#include <stdexcept>

#include "flchain/chain/consensus.hpp"

namespace flchain {

namespace {

std::unique_ptr<Network> make_network(const ScenarioConfig& cfg, std::size_t model_dim) {
    RngStream attach("client-attach", cfg.seed);
    Topology topo = Topology::make(cfg.miners, cfg.clients, cfg.attachment, attach);
    NetworkParams params;
    params.sizes = cfg.size_model(model_dim);
    params.miner_link_bps = cfg.link_capacity;
    params.client_link_bps = cfg.effective_client_capacity();
    params.zero_delays = cfg.zero_delays;
    return std::make_unique<Network>(std::move(topo), params, RngStream("propagation", cfg.seed),
                                     RngStream("client-link", cfg.seed));
}

ModelParams make_genesis(const ScenarioConfig& cfg, const LearningTask& task) {
    RngStream rng("genesis", cfg.seed);
    return task.initial_model(rng, cfg.init_scale);
}

}  // namespace

Simulation::Simulation(const ScenarioConfig& config, bool record_trace)
    : config_(config),
      bundle_(std::make_shared<const TaskBundle>(generate_task(config.task, config.seed, config.clients))),
      engine_(record_trace),
      network_(make_network(config, bundle_->task.dimension())),
      blocks_(make_genesis(config, bundle_->task)) {
    config_.validate();
    const auto bundle = bundle_;
    const auto* blocks = &blocks_;
    const std::uint64_t seed = config_.seed;
    const ScenarioConfig cfg = config_;
    txs_ = TxStore([bundle, blocks, seed, cfg](const Transaction& tx) {
        const Shard& shard = bundle->shards.at(tx.client);
        SgdParams sgd{cfg.learning_rate, cfg.epochs, std::min(cfg.batch_size, shard.size())};
        RngStream rng = client_training_stream(seed, tx.client, tx.step);
        return local_update(*blocks->get(tx.parent_block).model, bundle->task, shard.rows, sgd, rng);
    });

    const auto powers = config_.powers();
    double total = 0.0;
    for (double p : powers) total += p;
    RngStream mining_root("mining", seed);
    for (std::uint32_t m = 0; m < config_.miners; ++m) {
        views_.emplace_back(m, blocks_);
        rates_.push_back(mining_rate(powers[m], total, config_.block_interval));
        mining_rng_.push_back(mining_root.derive("miner", m));
        clients_of_.push_back(network_->topology().clients_of(m));
    }

    const TrainingCostModel cost{config_.instructions_per_sample_epoch};
    clients_.resize(config_.clients);
    for (std::uint32_t k = 0; k < config_.clients; ++k) {
        clients_[k].miner = network_->topology().attachment.at(k);
        clients_[k].training_time =
            training_duration(bundle_->shards.at(k).size(), config_.epochs, config_.compute_power, cost);
    }
}

SgdParams Simulation::client_sgd(std::uint32_t client) const {
    return SgdParams{config_.learning_rate, config_.epochs,
                     std::min(config_.batch_size, bundle_->shards.at(client).size())};
}

void Simulation::run() {
    if (engine_.fired() > 0 || phase_ != Phase::Running) throw std::logic_error("Simulation::run called twice");
    for (auto& view : views_) start_mining(view, rates_[view.owner()], engine_.now(), engine_, mining_rng_[view.owner()]);
    RngStream start_rng("client-start", config_.seed);
    for (std::uint32_t k = 0; k < config_.clients; ++k) {
        if (config_.client_start_jitter > 0.0) {
            const double at = start_rng.uniform01() * config_.client_start_jitter;
            clients_[k].pending_seq = engine_.schedule(SimTime(at), EventKind::ClientStepStart, k);
        } else {
            begin_step(k);
        }
    }
    engine_.run_until(StopCondition::when([this](const Engine&) { return phase_ == Phase::Done; }),
                      [this](const Event& ev) { handle(ev); });
}

void Simulation::handle(const Event& ev) {
    switch (ev.kind) {
        case EventKind::ClientStepStart:
            clients_.at(ev.target).pending_seq = 0;
            begin_step(ev.target);
            break;
        case EventKind::ClientTrainingDone:
            on_training_done(ev.target, BlockId(static_cast<std::uint32_t>(ev.payload)));
            break;
        case EventKind::TxGenerated:
            on_tx_generated(ev.target, TxId(static_cast<std::uint32_t>(ev.payload)));
            break;
        case EventKind::TxDelivered:
            --in_flight_;
            on_tx_delivered(ev.target, TxId(static_cast<std::uint32_t>(ev.payload)));
            break;
        case EventKind::BlockMined:
            on_block_mined(ev.target);
            break;
        case EventKind::BlockDelivered:
            --in_flight_;
            --blocks_in_flight_;
            on_block_delivered(ev.target, BlockId(static_cast<std::uint32_t>(ev.payload)));
            break;
        case EventKind::SimulationDrainDeadline:
            drain_.deadline_hit = true;
            drain_.converged = false;
            for (auto& view : views_) stop_mining(view, engine_);
            phase_ = Phase::Done;
            return;
    }
    if (phase_ == Phase::Running) {
        for (const auto& view : views_) {
            if (view.head_depth() >= config_.stop_depth) {
                enter_drain();
                break;
            }
        }
    }
    if (phase_ == Phase::Draining) check_drain();
}

void Simulation::begin_step(std::uint32_t client) {
    auto& c = clients_.at(client);
    const ChainView& view = views_.at(c.miner);
    c.pulled = view.head();
    c.pulled_at = engine_.now();
    const double pull = config_.pull_model ? network_->pull_delay() : 0.0;
    c.pending_seq = engine_.schedule(engine_.now().after(pull + c.training_time), EventKind::ClientTrainingDone, client,
                                     index_of(c.pulled));
}

void Simulation::on_training_done(std::uint32_t client, BlockId pulled) {
    auto& c = clients_.at(client);
    Transaction tx;
    tx.client = client;
    tx.origin_miner = c.miner;
    tx.n_samples = bundle_->shards.at(client).size();
    tx.ts_generated = engine_.now();
    tx.pulled_at = c.pulled_at;
    tx.parent_block = pulled;
    tx.step = c.step++;
    const TxId id = txs_.add(tx);
    c.pending_seq = engine_.schedule(engine_.now(), EventKind::TxGenerated, client, index_of(id));
}

void Simulation::on_tx_generated(std::uint32_t client, TxId tx) {
    auto& c = clients_.at(client);
    c.pending_seq = 0;
    network_->upload(client, index_of(tx), engine_.now(), engine_);
    ++in_flight_;
    if (config_.pull_policy == PullPolicy::AwaitInclusion) {
        c.awaiting = tx;
    } else {
        schedule_next_step(client);
    }
}

void Simulation::schedule_next_step(std::uint32_t client) {
    auto& c = clients_.at(client);
    if (config_.client_idle_time > 0.0) {
        c.pending_seq = engine_.schedule(engine_.now().after(config_.client_idle_time), EventKind::ClientStepStart, client);
    } else {
        begin_step(client);
    }
}

void Simulation::on_tx_delivered(std::uint32_t miner, TxId tx) {
    if (!views_.at(miner).on_tx_arrival(tx)) return;
    if (txs_.get(tx).origin_miner == miner) {
        in_flight_ += network_->broadcast(NodeId::miner(miner), Message::tx(index_of(tx)), engine_.now(), engine_).size();
    }
}

void Simulation::on_block_mined(std::uint32_t miner) {
    ChainView& view = views_.at(miner);
    view.mining_attempt.reset();
    Block block = build_block(view, blocks_, txs_, config_.max_txs_per_block, engine_.now(), aggregate);
    const std::size_t payload = block.empty() ? 0 : 1;
    const BlockId id = blocks_.add(std::move(block));
    view.on_block_arrival(id, engine_.now());
    const std::size_t sent =
        network_->broadcast(NodeId::miner(miner), Message::block(index_of(id), payload), engine_.now(), engine_).size();
    in_flight_ += sent;
    blocks_in_flight_ += sent;
    if (phase_ == Phase::Draining) {
        ++drain_.tie_break_blocks;
        for (auto& v : views_) stop_mining(v, engine_);
        return;
    }
    on_head_changed(miner);
}

void Simulation::on_block_delivered(std::uint32_t miner, BlockId block) {
    const ArrivalResult r = views_.at(miner).on_block_arrival(block, engine_.now());
    if (r.head_changed()) on_head_changed(miner);
}

void Simulation::on_head_changed(std::uint32_t miner) {
    ChainView& view = views_.at(miner);
    if (phase_ == Phase::Running) start_mining(view, rates_[miner], engine_.now(), engine_, mining_rng_[miner]);
    if (config_.pull_policy != PullPolicy::AwaitInclusion || phase_ != Phase::Running) return;
    for (std::uint32_t k : clients_of_.at(miner)) {
        auto& c = clients_[k];
        if (c.awaiting && view.on_chain(*c.awaiting)) {
            c.awaiting.reset();
            schedule_next_step(k);
        }
    }
}

void Simulation::enter_drain() {
    phase_ = Phase::Draining;
    drain_.stop_reached_at = engine_.now().seconds;
    for (auto& c : clients_) {
        if (c.pending_seq != 0) engine_.cancel(c.pending_seq);
        c.pending_seq = 0;
        c.awaiting.reset();
    }
    for (auto& view : views_) stop_mining(view, engine_);
    deadline_seq_ = engine_.schedule(engine_.now().after(config_.effective_drain_deadline()),
                                     EventKind::SimulationDrainDeadline, kNoMiner);
}

bool Simulation::heads_agree() const {
    return std::all_of(views_.begin(), views_.end(), [&](const ChainView& v) { return v.head() == views_.front().head(); });
}

void Simulation::check_drain() {
    // Transactions cannot move a head, so tie-breaks only wait for blocks.
    if (blocks_in_flight_ > 0) return;
    const bool mining = std::any_of(views_.begin(), views_.end(), [](const ChainView& v) { return v.mining_attempt.has_value(); });
    if (mining) return;
    if (heads_agree()) {
        if (in_flight_ > 0) return;
        drain_.converged = true;
        engine_.cancel(deadline_seq_);
        phase_ = Phase::Done;
        return;
    }
    for (auto& view : views_) start_mining(view, rates_[view.owner()], engine_.now(), engine_, mining_rng_[view.owner()]);
}

}  // namespace flchain
