#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "flchain/config/grid.hpp"
#include "flchain/config/scenario.hpp"
#include "flchain/metrics/metrics.hpp"

namespace flchain {

/// Everything a run writes, rendered in memory.
struct RunArtifacts {
    RunReport report;
    bool converged = false;
    std::string trace;
    std::string blocks_csv;
    std::string summary_json;
    std::string shards_csv;
    std::string config_json;
};

RunArtifacts execute_run(const ScenarioConfig& config);

/// Writes config.json, trace.txt, blocks.csv, summary.json and shards.csv.
void write_run(const std::filesystem::path& dir, const RunArtifacts& artifacts);

struct ExperimentResult {
    std::size_t runs = 0;
    std::size_t failures = 0;
    std::filesystem::path index;
};

/// One run per (grid point, seed) under `out/runs/<run_id>`, dispatched to
/// `jobs` worker threads, then `out/index.csv` with one row per run
/// (failed runs included with their error as status).
ExperimentResult run_experiment(const GridSpec& grid, const std::filesystem::path& out, unsigned jobs = 1);

struct AnalyzeResult {
    bool trace_matches = false;
    bool blocks_match = false;
    bool summary_matches = false;
    RunArtifacts artifacts;
};

/// Replays the run stored in `dir` from its config.json and compares the
/// regenerated trace, blocks.csv and summary.json with the stored files.
AnalyzeResult analyze_run(const std::filesystem::path& dir);

}  // namespace flchain
