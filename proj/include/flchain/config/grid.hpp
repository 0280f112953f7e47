#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "flchain/config/scenario.hpp"

namespace flchain {

/// Parameter sweep: base overrides, per-key value lists and seeds. The
/// Cartesian product runs over keys in sorted order, the last key varying
/// fastest.
struct GridSpec {
    nlohmann::json base = nlohmann::json::object();
    std::map<std::string, std::vector<nlohmann::json>> axes;
    std::vector<std::uint64_t> seeds{0};

    std::size_t config_count() const;
    std::size_t run_count() const { return config_count() * seeds.size(); }
    /// Override document of the i-th grid point (base plus axis values).
    nlohmann::json point(std::size_t index) const;
};

/// {"base": {...}, "grid": {key: [values]}, "seeds": [...]}. Unknown keys,
/// empty value lists and an empty seed list are rejected.
GridSpec parse_grid(const nlohmann::json& doc);
GridSpec load_grid(const std::string& path);

/// BI {1,10,60} x N_t {1,5,10} x C_link {1,100} Mbps x K {10,50,100}.
GridSpec canonical_grid(std::vector<std::uint64_t> seeds = {0});

}  // namespace flchain
