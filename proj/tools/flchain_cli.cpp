#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "flchain/config/grid.hpp"
#include "flchain/config/oracle.hpp"
#include "flchain/config/runner.hpp"
#include "flchain/config/scenario.hpp"

namespace fs = std::filesystem;
using namespace flchain;

namespace {

nlohmann::json read_overrides(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    try {
        return nlohmann::json::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
    }
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t n) {
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < n; ++i) seeds.push_back(first + i);
    return seeds;
}

int cmd_run(const std::string& config_path, std::uint64_t seed, std::size_t runs, const std::string& out,
            bool degenerate, unsigned jobs) {
    nlohmann::json overrides = read_overrides(config_path);
    if (degenerate) overrides["degenerate"] = true;
    if (runs <= 1) {
        overrides["seed"] = seed;
        const ScenarioConfig cfg = parse_config(overrides);
        RunArtifacts a = execute_run(cfg);
        write_run(out, a);
        std::cout << a.summary_json;
        return 0;
    }
    GridSpec grid;
    grid.base = overrides;
    parse_config(grid.base);
    grid.seeds = seed_range(seed, runs);
    const ExperimentResult r = run_experiment(grid, out, jobs);
    std::printf("%zu runs, %zu failed; index at %s\n", r.runs, r.failures, r.index.string().c_str());
    return r.failures == 0 ? 0 : 1;
}

int cmd_sweep(const std::string& grid_path, bool canonical, std::size_t runs, std::uint64_t seed,
              const std::string& out, unsigned jobs) {
    GridSpec grid = canonical ? canonical_grid() : load_grid(grid_path);
    if (runs > 0) grid.seeds = seed_range(seed, runs);
    const ExperimentResult r = run_experiment(grid, out, jobs);
    std::printf("%zu runs, %zu failed; index at %s\n", r.runs, r.failures, r.index.string().c_str());
    return r.failures == 0 ? 0 : 1;
}

int analyze_one(const fs::path& dir) {
    const AnalyzeResult r = analyze_run(dir);
    const bool ok = r.trace_matches && r.blocks_match && r.summary_matches;
    std::printf("%s trace=%s blocks=%s summary=%s\n", dir.string().c_str(), r.trace_matches ? "match" : "DIFFER",
                r.blocks_match ? "match" : "DIFFER", r.summary_matches ? "match" : "DIFFER");
    return ok ? 0 : 1;
}

int cmd_analyze(const std::string& out) {
    const fs::path root(out);
    if (fs::exists(root / "config.json")) return analyze_one(root);
    if (!fs::is_directory(root / "runs")) {
        std::cerr << "error: " << out << " holds neither a run nor a runs/ directory\n";
        return 2;
    }
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root / "runs")) {
        if (fs::exists(entry.path() / "config.json")) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end());
    int status = 0;
    for (const auto& d : dirs) status |= analyze_one(d);
    return status;
}

int cmd_oracle(const std::string& config_path, std::uint64_t seed, std::size_t rounds, const std::string& out) {
    nlohmann::json overrides = read_overrides(config_path);
    overrides["seed"] = seed;
    const OracleResult result = run_oracle(parse_config(overrides), rounds);
    fs::create_directories(out);
    std::ofstream csv(fs::path(out) / "oracle.csv");
    write_oracle_csv(csv, result);
    std::printf("rounds=%zu simulated_blocks=%zu max_relative_diff=%.3g\n", rounds, result.simulated_blocks,
                result.max_relative_diff);
    return result.matches(1e-9) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blockchained federated learning simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out = "out";
    std::uint64_t seed = 0;
    std::size_t runs = 1;
    bool degenerate = false;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

    auto* run = app.add_subcommand("run", "Simulate one configuration");
    run->add_option("--config", config_path, "JSON file of config overrides");
    run->add_option("--seed", seed, "Seed (first seed when --runs > 1)");
    run->add_option("--runs", runs, "Number of consecutive seeds");
    run->add_option("--out", out, "Output directory");
    run->add_flag("--degenerate", degenerate, "One miner, zero delays, N_t = K, clients synchronised on inclusion");
    run->add_option("--jobs", jobs, "Worker threads");

    bool canonical = false;
    std::size_t sweep_runs = 0;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter grid");
    sweep->add_option("--config", config_path, "Grid JSON: {base, grid, seeds}");
    sweep->add_flag("--canonical", canonical, "Use the built-in 54-point grid");
    sweep->add_option("--runs", sweep_runs, "Override seeds with --seed .. --seed + runs - 1");
    sweep->add_option("--seed", seed, "First seed for --runs");
    sweep->add_option("--out", out, "Output directory");
    sweep->add_option("--jobs", jobs, "Worker threads");

    auto* analyze = app.add_subcommand("analyze", "Replay stored runs and verify their outputs");
    analyze->add_option("--out", out, "Run directory or sweep output directory")->required();

    std::size_t rounds = 10;
    auto* oracle = app.add_subcommand("oracle", "Compare degenerate mode against synchronous FedAvg");
    oracle->add_option("--config", config_path, "JSON file of config overrides");
    oracle->add_option("--seed", seed, "Seed");
    oracle->add_option("--rounds", rounds, "FedAvg rounds");
    oracle->add_option("--out", out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path, seed, runs, out, degenerate, jobs);
        if (*sweep) {
            if (config_path.empty() && !canonical) {
                std::cerr << "error: sweep needs --config <grid.json> or --canonical\n";
                return 2;
            }
            return cmd_sweep(config_path, canonical, sweep_runs, seed, out, jobs);
        }
        if (*analyze) return cmd_analyze(out);
        if (*oracle) return cmd_oracle(config_path, seed, rounds, out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
