#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "flchain/config/grid.hpp"
#include "flchain/config/runner.hpp"
#include "flchain/config/scenario.hpp"

using namespace flchain;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string error_of(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("flchain_test_" + name);
    fs::remove_all(p);
    return p;
}

json tiny_base() {
    return json{{"miners", 3},      {"clients", 4},      {"train_samples", 200}, {"heldout_samples", 100},
                {"stop_depth", 6}, {"block_interval", 5}, {"instructions_per_sample_epoch", 3.6e6}};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("empty overrides give the canonical defaults") {
    const ScenarioConfig c = parse_config(json::object());
    CHECK(c.block_interval == 10.0);
    CHECK(c.max_txs_per_block == 10);
    CHECK(c.miners == 10);
    CHECK(c.clients == 50);
    CHECK(c.header_bits == 20e3);
    CHECK(c.link_capacity == 1e6);
    CHECK(c.stop_depth == 200);
    CHECK(c.epochs == 5);
    CHECK(c.batch_size == 64);
    CHECK(c.compute_power == 9e8);
    CHECK(c.task.validation_share == 0.7);
}

TEST_CASE("non-positive values name the field") {
    const std::string e = error_of(json{{"block_interval", -1}});
    CHECK(e.find("block_interval") != std::string::npos);
    CHECK(e.find("BI") != std::string::npos);
    CHECK(error_of(json{{"miners", 0}}).find("(M)") != std::string::npos);
    CHECK(error_of(json{{"clients", 0}}).find("(K)") != std::string::npos);
    CHECK(error_of(json{{"stop_depth", 0}}).find("N_b") != std::string::npos);
    CHECK(error_of(json{{"link_capacity", 0}}).find("link_capacity") != std::string::npos);
}

TEST_CASE("unknown keys get a suggestion") {
    const std::string e = error_of(json{{"blok_interval", 3}});
    CHECK(e.find("blok_interval") != std::string::npos);
    CHECK(e.find("did you mean 'block_interval'") != std::string::npos);
    CHECK(closest_key("minrs") == "miners");
}

TEST_CASE("type errors are reported") {
    CHECK_FALSE(error_of(json{{"miners", "ten"}}).empty());
    CHECK_FALSE(error_of(json{{"miners", 2.5}}).empty());
    CHECK_FALSE(error_of(json{{"zero_delays", 1}}).empty());
    CHECK_FALSE(error_of(json{{"task", "cifar"}}).empty());
    CHECK_FALSE(error_of(json{{"miner_powers", json::array({1, 2})}}).empty());
    CHECK_FALSE(error_of(json::array()).empty());
    CHECK_THROWS_AS(parse_config_text("{ not json"), ConfigError);
}

TEST_CASE("config round-trips through JSON") {
    const ScenarioConfig c = parse_config(json{{"block_interval", 60}, {"miner_powers", {1, 2, 3}}, {"miners", 3},
                                               {"task", "linear-regression"}, {"pull_policy", "await_inclusion"}});
    const ScenarioConfig back = parse_config(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(back.task.kind == TaskKind::LinearRegression);
    CHECK(back.miner_powers == std::vector<double>{1, 2, 3});
}

TEST_CASE("config hash is stable and ignores the seed") {
    ScenarioConfig a;
    ScenarioConfig b;
    b.seed = 99;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.block_interval = 60;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(parse_config(to_json(a))) == config_hash(a));
}

TEST_CASE("config columns are sorted") {
    const auto cols = config_columns(ScenarioConfig{});
    for (std::size_t i = 1; i < cols.size(); ++i) CHECK(cols[i - 1].first < cols[i].first);
    CHECK(cols.size() + 1 == config_keys().size());  // every key but the degenerate switch
}

TEST_CASE("degenerate mode settings") {
    ScenarioConfig c;
    c.clients = 7;
    const ScenarioConfig d = c.degenerate();
    CHECK(d.miners == 1);
    CHECK(d.zero_delays);
    CHECK(d.max_txs_per_block == 7);
    CHECK(d.pull_policy == PullPolicy::AwaitInclusion);
    CHECK(parse_config(json{{"clients", 7}, {"degenerate", true}}).max_txs_per_block == 7);
}

TEST_CASE("grid enumerates the sorted Cartesian product") {
    const GridSpec g = parse_grid(json{{"grid", {{"link_capacity", {1e6, 1e8}}, {"block_interval", {1, 10, 60}}}},
                                       {"seeds", {0, 1, 2, 3, 4}}});
    CHECK(g.config_count() == 6);
    CHECK(g.run_count() == 30);
    // block_interval sorts first and varies slowest.
    CHECK(g.point(0)["block_interval"] == 1);
    CHECK(g.point(0)["link_capacity"] == 1e6);
    CHECK(g.point(1)["link_capacity"] == 1e8);
    CHECK(g.point(5)["block_interval"] == 60);
    CHECK(canonical_grid().config_count() == 54);
}

TEST_CASE("grid documents are validated") {
    CHECK_THROWS_AS(parse_grid(json{{"grid", {{"blok_interval", {1}}}}}), ConfigError);
    CHECK_THROWS_AS(parse_grid(json{{"grid", {{"block_interval", json::array()}}}}), ConfigError);
    CHECK_THROWS_AS(parse_grid(json{{"base", {{"miners", 2}}}}), ConfigError);
    CHECK_THROWS_AS(parse_grid(json{{"grid", json::object()}, {"seeds", json::array()}}), ConfigError);
    CHECK_THROWS_AS(parse_grid(json{{"grid", json::object()}, {"extra", 1}}), ConfigError);
}

TEST_CASE("a sweep writes one run per grid point and seed") {
    const fs::path out = scratch("sweep");
    GridSpec g = parse_grid(json{{"base", tiny_base()},
                                 {"grid", {{"block_interval", {1, 10, 60}}, {"link_capacity", {1e6, 1e8}}}},
                                 {"seeds", {0, 1, 2, 3, 4}}});
    const ExperimentResult r = run_experiment(g, out, 2);
    CHECK(r.runs == 30);
    CHECK(r.failures == 0);
    std::size_t summaries = 0;
    for (const auto& d : fs::directory_iterator(out / "runs")) {
        summaries += fs::exists(d.path() / "summary.json") ? 1 : 0;
        for (const char* f : {"blocks.csv", "shards.csv", "trace.txt", "config.json"}) CHECK(fs::exists(d.path() / f));
    }
    CHECK(summaries == 30);
    const std::string index = slurp(out / "index.csv");
    CHECK(count_lines(index) == 31);
    CHECK(index.rfind("run_id,status,seed,config_hash,", 0) == 0);

    // Rerunning the same grid reproduces every file byte for byte.
    const fs::path again = scratch("sweep_again");
    run_experiment(g, again, 1);
    CHECK(slurp(again / "index.csv") == index);
    for (const auto& d : fs::directory_iterator(out / "runs")) {
        for (const char* f : {"blocks.csv", "summary.json", "trace.txt", "shards.csv"}) {
            CHECK(slurp(d.path() / f) == slurp(again / "runs" / d.path().filename() / f));
        }
    }
    fs::remove_all(out);
    fs::remove_all(again);
}

TEST_CASE("failed runs are recorded and the rest proceed") {
    const fs::path out = scratch("failing");
    GridSpec g = parse_grid(json{{"base", tiny_base()}, {"grid", {{"block_interval", {5, -1}}}}, {"seeds", {0, 1}}});
    const ExperimentResult r = run_experiment(g, out, 1);
    CHECK(r.runs == 4);
    CHECK(r.failures == 2);
    const std::string index = slurp(out / "index.csv");
    CHECK(count_lines(index) == 5);
    CHECK(index.find("error: config key 'block_interval' (BI)") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("analyze replays a stored run") {
    const fs::path out = scratch("analyze");
    const ScenarioConfig cfg = parse_config(tiny_base());
    write_run(out, execute_run(cfg));
    AnalyzeResult a = analyze_run(out);
    CHECK(a.trace_matches);
    CHECK(a.blocks_match);
    CHECK(a.summary_matches);
    {
        std::ofstream f(out / "trace.txt", std::ios::app);
        f << "tampered\n";
    }
    CHECK_FALSE(analyze_run(out).trace_matches);
    fs::remove_all(out);
}
