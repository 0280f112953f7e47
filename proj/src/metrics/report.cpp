#include "flchain/metrics/report.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace flchain {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

void write_blocks_csv(std::ostream& out, const RunReport& report) {
    out << kBlocksCsvHeader << '\n';
    for (const BlockRow& row : report.per_block) {
        out << index_of(row.id) << ',';
        if (row.parent) out << index_of(*row.parent);
        out << ',' << row.depth << ',' << row.miner << ',' << format_number(row.ts_mined) << ',' << row.n_txs << ','
            << row.total_samples << ',' << (row.on_main_chain ? 1 : 0) << ',' << optional_number(row.staleness) << ','
            << optional_number(row.train_acc) << ',' << optional_number(row.val_acc) << '\n';
    }
}

void write_summary_json(std::ostream& out, const RunReport& report) {
    nlohmann::ordered_json j;
    j["throughput_tps"] = report.throughput_tps;
    j["empirical_fork_rate"] = report.empirical_fork_rate;
    j["analytic_fork_prob_per_miner_mu"] = report.analytic_fork_prob_per_miner_mu;
    j["analytic_fork_prob_aggregate_mu"] = report.analytic_fork_prob_aggregate_mu;
    j["final_test_acc"] = report.final_test_acc;
    j["t_sim_total"] = report.t_sim_total;
    j["seed"] = report.seed;
    j["config_hash"] = report.config_hash;
    out << j.dump(2) << '\n';
}

void write_shards_csv(std::ostream& out, const TaskBundle& bundle) {
    const std::size_t classes = bundle.task.classes();
    out << "client,n_samples";
    for (std::size_t c = 0; c < classes; ++c) out << ",class_" << c;
    out << '\n';
    for (std::size_t k = 0; k < bundle.shards.size(); ++k) {
        out << k << ',' << bundle.shards[k].size();
        for (std::size_t n : class_histogram(bundle.task, bundle.shards[k])) out << ',' << n;
        out << '\n';
    }
}

std::string blocks_csv(const RunReport& report) {
    std::ostringstream os;
    write_blocks_csv(os, report);
    return os.str();
}

std::string summary_json(const RunReport& report) {
    std::ostringstream os;
    write_summary_json(os, report);
    return os.str();
}

}  // namespace flchain
