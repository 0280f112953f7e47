#pragma once

#include <iosfwd>
#include <string>

#include "flchain/fl/task.hpp"
#include "flchain/metrics/metrics.hpp"

namespace flchain {

inline constexpr const char* kBlocksCsvHeader =
    "block_id,parent_id,depth,miner,ts_mined,n_txs,total_samples,on_main_chain,staleness,train_acc,val_acc";

/// %.12g; shared by every CSV writer so reruns are byte-identical.
std::string format_number(double v);

void write_blocks_csv(std::ostream& out, const RunReport& report);
void write_summary_json(std::ostream& out, const RunReport& report);
/// client, n_samples, class_0 .. class_{C-1} (no class columns for regression).
void write_shards_csv(std::ostream& out, const TaskBundle& bundle);

std::string blocks_csv(const RunReport& report);
std::string summary_json(const RunReport& report);

}  // namespace flchain
