#include "flchain/config/grid.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace flchain {

using nlohmann::json;

std::size_t GridSpec::config_count() const {
    std::size_t n = 1;
    for (const auto& [key, values] : axes) n *= values.size();
    return n;
}

json GridSpec::point(std::size_t index) const {
    if (index >= config_count()) throw std::out_of_range("grid point index out of range");
    json doc = base;
    std::size_t rest = index;
    for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
        const auto& values = it->second;
        doc[it->first] = values[rest % values.size()];
        rest /= values.size();
    }
    return doc;
}

namespace {

void check_key(const std::string& key) {
    const auto& keys = config_keys();
    if (!std::binary_search(keys.begin(), keys.end(), key)) {
        throw ConfigError("unknown config key '" + key + "'; did you mean '" + closest_key(key) + "'?");
    }
}

}  // namespace

GridSpec parse_grid(const json& doc) {
    if (!doc.is_object()) throw ConfigError("grid document must be a JSON object");
    GridSpec grid;
    for (const auto& [key, value] : doc.items()) {
        if (key != "base" && key != "grid" && key != "seeds") {
            throw ConfigError("unknown grid field '" + key + "'; expected base, grid or seeds");
        }
    }
    if (doc.contains("base")) {
        if (!doc["base"].is_object()) throw ConfigError("grid field 'base' must be an object");
        for (const auto& [key, value] : doc["base"].items()) check_key(key);
        grid.base = doc["base"];
        parse_config(grid.base);
    }
    if (!doc.contains("grid")) throw ConfigError("grid document is missing required field 'grid'");
    if (!doc["grid"].is_object()) throw ConfigError("grid field 'grid' must be an object of value lists");
    for (const auto& [key, values] : doc["grid"].items()) {
        check_key(key);
        if (!values.is_array() || values.empty()) {
            throw ConfigError("grid values for '" + key + "' must be a non-empty list");
        }
        grid.axes[key] = std::vector<json>(values.begin(), values.end());
    }
    if (doc.contains("seeds")) {
        const json& seeds = doc["seeds"];
        if (!seeds.is_array() || seeds.empty()) throw ConfigError("grid field 'seeds' must be a non-empty list");
        grid.seeds.clear();
        for (const auto& s : seeds) {
            if (!s.is_number_integer() || s.get<long long>() < 0) throw ConfigError("grid seeds must be non-negative integers");
            grid.seeds.push_back(s.get<std::uint64_t>());
        }
    }
    return grid;
}

GridSpec load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    json doc;
    try {
        doc = json::parse(ss.str(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("grid file is not valid JSON: ") + e.what());
    }
    return parse_grid(doc);
}

GridSpec canonical_grid(std::vector<std::uint64_t> seeds) {
    GridSpec grid;
    grid.axes["block_interval"] = {1.0, 10.0, 60.0};
    grid.axes["max_txs_per_block"] = {1, 5, 10};
    grid.axes["link_capacity"] = {1e6, 1e8};
    grid.axes["clients"] = {10, 50, 100};
    grid.seeds = std::move(seeds);
    return grid;
}

}  // namespace flchain
