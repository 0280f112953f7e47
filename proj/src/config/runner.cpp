#include "flchain/config/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "flchain/engine/trace.hpp"
#include "flchain/metrics/report.hpp"
#include "flchain/simulation.hpp"

namespace flchain {

namespace fs = std::filesystem;

RunArtifacts execute_run(const ScenarioConfig& config) {
    Simulation sim(config);
    sim.run();
    RunArtifacts a;
    a.report = make_report(sim);
    a.converged = sim.drain().converged;
    a.trace = trace_to_string(sim.trace());
    a.blocks_csv = blocks_csv(a.report);
    a.summary_json = summary_json(a.report);
    std::ostringstream shards;
    write_shards_csv(shards, sim.bundle());
    a.shards_csv = shards.str();
    a.config_json = to_json(config).dump(2) + "\n";
    return a;
}

namespace {

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c == '\n' ? ' ' : c;
    }
    return q + "\"";
}

struct RunSlot {
    std::string run_id;
    std::uint64_t seed = 0;
    nlohmann::json overrides;
    std::string status = "pending";
    std::string hash;
    std::vector<std::pair<std::string, std::string>> columns;
    RunReport report;
    bool converged = false;
    bool ok = false;
};

}  // namespace

void write_run(const fs::path& dir, const RunArtifacts& a) {
    fs::create_directories(dir);
    write_file(dir / "config.json", a.config_json);
    write_file(dir / "trace.txt", a.trace);
    write_file(dir / "blocks.csv", a.blocks_csv);
    write_file(dir / "summary.json", a.summary_json);
    write_file(dir / "shards.csv", a.shards_csv);
}

ExperimentResult run_experiment(const GridSpec& grid, const fs::path& out, unsigned jobs) {
    fs::create_directories(out / "runs");
    std::vector<RunSlot> slots;
    const std::size_t configs = grid.config_count();
    const int width = std::max<int>(3, static_cast<int>(std::to_string(configs).size()));
    for (std::size_t i = 0; i < configs; ++i) {
        for (std::uint64_t seed : grid.seeds) {
            RunSlot s;
            char id[64];
            std::snprintf(id, sizeof id, "c%0*zu_s%llu", width, i, static_cast<unsigned long long>(seed));
            s.run_id = id;
            s.seed = seed;
            s.overrides = grid.point(i);
            s.overrides["seed"] = seed;
            slots.push_back(std::move(s));
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < slots.size(); i = next++) {
            RunSlot& s = slots[i];
            try {
                const ScenarioConfig cfg = parse_config(s.overrides);
                s.hash = config_hash(cfg);
                s.columns = config_columns(cfg);
                RunArtifacts a = execute_run(cfg);
                write_run(out / "runs" / s.run_id, a);
                s.report = std::move(a.report);
                s.converged = a.converged;
                s.status = "ok";
                s.ok = true;
            } catch (const std::exception& e) {
                s.status = std::string("error: ") + e.what();
            }
        }
    };
    const unsigned n_workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(slots.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }

    // Column set of the default config, so failed rows line up.
    std::vector<std::string> config_cols;
    for (const auto& [key, value] : config_columns(ScenarioConfig{})) {
        if (key != "seed") config_cols.push_back(key);
    }
    ExperimentResult result;
    result.runs = slots.size();
    result.index = out / "index.csv";
    std::ofstream index(result.index, std::ios::binary);
    if (!index) throw std::runtime_error("cannot write '" + result.index.string() + "'");
    index << "run_id,status,seed,config_hash";
    for (const auto& c : config_cols) index << ',' << c;
    index << ",throughput_tps,empirical_fork_rate,analytic_fork_prob_per_miner_mu,analytic_fork_prob_aggregate_mu,"
             "final_test_acc,t_sim_total,converged,run_dir\n";
    for (const RunSlot& s : slots) {
        if (!s.ok) ++result.failures;
        index << s.run_id << ',' << csv_field(s.status) << ',' << s.seed << ',' << s.hash;
        for (const auto& c : config_cols) {
            index << ',';
            for (const auto& [key, value] : s.columns) {
                if (key == c) index << csv_field(value);
            }
        }
        if (s.ok) {
            const RunReport& r = s.report;
            index << ',' << format_number(r.throughput_tps) << ',' << format_number(r.empirical_fork_rate) << ','
                  << format_number(r.analytic_fork_prob_per_miner_mu) << ','
                  << format_number(r.analytic_fork_prob_aggregate_mu) << ',' << format_number(r.final_test_acc) << ','
                  << format_number(r.t_sim_total) << ',' << (s.converged ? 1 : 0) << ','
                  << csv_field(("runs" / fs::path(s.run_id)).generic_string());
        } else {
            index << ",,,,,,,,";
        }
        index << '\n';
    }
    return result;
}

AnalyzeResult analyze_run(const fs::path& dir) {
    const ScenarioConfig cfg = parse_config_text(read_file(dir / "config.json"));
    AnalyzeResult r;
    r.artifacts = execute_run(cfg);
    r.trace_matches = read_file(dir / "trace.txt") == r.artifacts.trace;
    r.blocks_match = read_file(dir / "blocks.csv") == r.artifacts.blocks_csv;
    r.summary_matches = read_file(dir / "summary.json") == r.artifacts.summary_json;
    return r;
}

}  // namespace flchain
