#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "flchain/chain/store.hpp"
#include "flchain/metrics/metrics.hpp"
#include "flchain/metrics/report.hpp"
#include "flchain/simulation.hpp"
#include "json.hpp"
#include "stats.hpp"

using namespace flchain;

namespace {

struct Tree {
    BlockStore blocks{ModelParams(1, 0.0)};
    TxStore txs;

    TxId tx(double generated) {
        Transaction t;
        t.n_samples = 1;
        t.ts_generated = SimTime(generated);
        return txs.add(t, ModelParams(1));
    }
    BlockId block(BlockId parent, std::vector<TxId> inc, double ts) {
        Block b;
        b.parent = parent;
        b.depth = blocks.get(parent).depth + 1;
        b.ts_mined = SimTime(ts);
        b.txs = std::move(inc);
        b.model = blocks.get(parent).model;
        return blocks.add(std::move(b));
    }
};

ScenarioConfig small_config(std::uint64_t seed = 0) {
    ScenarioConfig c;
    c.miners = 4;
    c.clients = 8;
    c.task.train_samples = 400;
    c.task.heldout_samples = 200;
    c.stop_depth = 20;
    c.block_interval = 5;
    c.max_txs_per_block = 3;
    c.link_capacity = 5e6;
    c.instructions_per_sample_epoch = 3.6e6;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("throughput counts main-chain transactions per second") {
    Tree t;
    std::vector<BlockId> chain{kGenesis};
    for (int b = 0; b < 200; ++b) {
        std::vector<TxId> inc;
        for (int i = 0; i < 10; ++i) inc.push_back(t.tx(0));
        chain.push_back(t.block(chain.back(), inc, b));
    }
    CHECK(throughput(t.blocks, chain, 2000.0) == doctest::Approx(1.0));
    // A fork branch adds nothing.
    t.block(chain[5], {t.tx(0), t.tx(0)}, 5);
    CHECK(throughput(t.blocks, chain, 2000.0) == doctest::Approx(1.0));
    CHECK_THROWS(throughput(t.blocks, chain, 0.0));

    Tree empty;
    std::vector<BlockId> bare{kGenesis};
    for (int b = 0; b < 5; ++b) bare.push_back(empty.block(bare.back(), {}, b));
    CHECK(throughput(empty.blocks, bare, 10.0) == 0.0);
}

TEST_CASE("block staleness is the mean transaction age at mining") {
    Tree t;
    const BlockId b = t.block(kGenesis, {t.tx(90), t.tx(95)}, 100);
    CHECK(*block_staleness(t.blocks.get(b), t.txs) == doctest::Approx(7.5));
    const BlockId c = t.block(b, {t.tx(120)}, 120);
    CHECK(*block_staleness(t.blocks.get(c), t.txs) == 0.0);
    const BlockId e = t.block(c, {}, 130);
    CHECK_FALSE(block_staleness(t.blocks.get(e), t.txs).has_value());
}

TEST_CASE("empirical fork rate") {
    Tree t;
    std::vector<BlockId> chain{kGenesis};
    for (int i = 0; i < 8; ++i) chain.push_back(t.block(chain.back(), {}, i));
    CHECK(empirical_fork_rate(t.blocks, chain) == 0.0);
    t.block(chain[2], {}, 2.5);
    t.block(chain[6], {}, 6.5);
    CHECK(empirical_fork_rate(t.blocks, chain) == doctest::Approx(0.2));
    Tree none;
    CHECK_THROWS(empirical_fork_rate(none.blocks, std::vector<BlockId>{kGenesis}));
}

TEST_CASE("run report covers every mined block") {
    Simulation sim(small_config());
    sim.run();
    const RunReport r = make_report(sim);
    CHECK(r.per_block.size() == sim.blocks().size() - 1);
    std::size_t on_main = 0;
    for (const auto& row : r.per_block) {
        on_main += row.on_main_chain ? 1 : 0;
        CHECK(row.staleness.has_value() == (row.n_txs > 0));
        CHECK(row.train_acc.has_value() == (row.n_txs > 0));
        if (row.train_acc) {
            CHECK((*row.train_acc >= 0.0 && *row.train_acc <= 1.0));
            CHECK((*row.val_acc >= 0.0 && *row.val_acc <= 1.0));
        }
    }
    CHECK(on_main == r.main_chain.size() - 1);
    CHECK((r.empirical_fork_rate >= 0.0 && r.empirical_fork_rate <= 1.0));
    CHECK(r.t_sim_total == sim.end_time());
    CHECK(r.config_hash == config_hash(sim.config()));
}

TEST_CASE("reports are a pure function of the run") {
    Simulation a(small_config(3)), b(small_config(3));
    a.run();
    b.run();
    CHECK(summary_json(make_report(a)) == summary_json(make_report(b)));
    CHECK(blocks_csv(make_report(a)) == blocks_csv(make_report(a)));
    CHECK(blocks_csv(make_report(a)) == blocks_csv(make_report(b)));
}

TEST_CASE("blocks.csv layout") {
    Simulation sim(small_config(1));
    sim.run();
    const RunReport r = make_report(sim);
    std::istringstream in(blocks_csv(r));
    std::string line;
    std::getline(in, line);
    CHECK(line == "block_id,parent_id,depth,miner,ts_mined,n_txs,total_samples,on_main_chain,staleness,train_acc,val_acc");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 10);
    }
    CHECK(rows == r.per_block.size());
}

TEST_CASE("empty blocks leave staleness and accuracy blank") {
    RunReport r;
    BlockRow row;
    row.id = BlockId(1);
    row.parent = kGenesis;
    row.depth = 1;
    row.ts_mined = 2.5;
    r.per_block.push_back(row);
    const std::string csv = blocks_csv(r);
    CHECK(csv.substr(csv.find('\n') + 1) == "1,0,1,0,2.5,0,0,0,,,\n");
}

TEST_CASE("summary.json has exactly the documented keys") {
    Simulation sim(small_config(2));
    sim.run();
    const auto j = nlohmann::json::parse(summary_json(make_report(sim)));
    std::set<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.insert(k);
    CHECK(keys == std::set<std::string>{"throughput_tps", "empirical_fork_rate", "analytic_fork_prob_per_miner_mu",
                                        "analytic_fork_prob_aggregate_mu", "final_test_acc", "t_sim_total", "seed",
                                        "config_hash"});
    CHECK(j["seed"] == 2);
    CHECK(j["config_hash"].is_string());
}

TEST_CASE("shards.csv lists sizes and class histograms") {
    Simulation sim(small_config());
    std::ostringstream os;
    write_shards_csv(os, sim.bundle());
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "client,n_samples,class_0,class_1,class_2,class_3,class_4,class_5,class_6,class_7,class_8,class_9");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string cell;
        std::vector<long> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(std::stol(cell));
        REQUIRE(cells.size() == 12);
        long sum = 0;
        for (std::size_t i = 2; i < cells.size(); ++i) sum += cells[i];
        CHECK(sum == cells[1]);
        ++rows;
    }
    CHECK(rows == 8);
}

TEST_CASE("analytic columns use both rate interpretations") {
    ScenarioConfig c = small_config();
    Simulation sim(c);
    sim.run();
    const RunReport r = make_report(sim);
    const double t_bp = sim.network().block_mean(1);
    CHECK(r.analytic_fork_prob_per_miner_mu == doctest::Approx(1 - std::exp(-(c.miners - 1.0) * t_bp / (c.miners * c.block_interval))));
    CHECK(r.analytic_fork_prob_aggregate_mu == doctest::Approx(1 - std::exp(-(c.miners - 1.0) * t_bp / c.block_interval)));
}

TEST_CASE("main-chain accuracy rises with depth in stable configurations") {
    std::vector<double> rhos;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ScenarioConfig c = small_config(seed);
        c.block_interval = 10;
        c.max_txs_per_block = 10;
        c.link_capacity = 1e8;
        c.client_idle_time = 20;  // below block capacity, so updates start from recent heads
        c.stop_depth = 40;
        Simulation sim(c);
        sim.run();
        std::vector<double> depth, acc;
        for (const auto& row : make_report(sim).per_block) {
            if (!row.on_main_chain || !row.val_acc) continue;
            depth.push_back(row.depth);
            acc.push_back(*row.val_acc);
        }
        rhos.push_back(testing::spearman(depth, acc));
    }
    CHECK(testing::mean(rhos) > 0.0);
}

TEST_CASE("spearman correlation") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    CHECK(testing::spearman(x, std::vector<double>{2, 4, 6, 8, 100}) == doctest::Approx(1.0));
    CHECK(testing::spearman(x, std::vector<double>{5, 4, 3, 2, 1}) == doctest::Approx(-1.0));
    CHECK(testing::ranks(std::vector<double>{3, 1, 3}) == std::vector<double>{2.5, 1, 2.5});
}
