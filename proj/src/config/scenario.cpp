#include "flchain/config/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "flchain/engine/rng.hpp"

namespace flchain {

using nlohmann::json;

SizeModel ScenarioConfig::size_model(std::size_t model_dim) const {
    if (tx_bits > 0.0) return SizeModel{tx_bits, header_bits};
    return SizeModel::for_model(model_dim, header_bits);
}

std::vector<double> ScenarioConfig::powers() const {
    if (miner_powers.empty()) return std::vector<double>(miners, 1.0);
    return miner_powers;
}

ScenarioConfig ScenarioConfig::degenerate() const {
    ScenarioConfig d = *this;
    d.miners = 1;
    d.miner_powers.clear();
    d.zero_delays = true;
    d.max_txs_per_block = clients;
    d.pull_policy = PullPolicy::AwaitInclusion;
    d.client_idle_time = 0.0;
    d.client_start_jitter = 0.0;
    return d;
}

namespace {

struct KeyInfo {
    std::string symbol;  // name used in the model equations, for diagnostics
    std::function<void(ScenarioConfig&, const json&)> set;
    std::function<json(const ScenarioConfig&)> get;
};

double as_number(const std::string& key, const json& v) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    return v.get<double>();
}

std::uint64_t as_count(const std::string& key, const json& v) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    const double d = v.get<double>();
    if (d < 0 || d != std::floor(d)) throw ConfigError("config key '" + key + "' must be a non-negative integer");
    return v.is_number_unsigned() ? v.get<std::uint64_t>() : static_cast<std::uint64_t>(d);
}

bool as_bool(const std::string& key, const json& v) {
    if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be true or false");
    return v.get<bool>();
}

std::string as_string(const std::string& key, const json& v) {
    if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

#define FLCHAIN_NUM(key, sym, field)                                                              \
    {key, KeyInfo{sym, [](ScenarioConfig& c, const json& v) { c.field = as_number(key, v); }, \
                  [](const ScenarioConfig& c) { return json(c.field); }}}
#define FLCHAIN_COUNT(key, sym, field, type)                                                                    \
    {key, KeyInfo{sym, [](ScenarioConfig& c, const json& v) { c.field = static_cast<type>(as_count(key, v)); }, \
                  [](const ScenarioConfig& c) { return json(c.field); }}}

const std::map<std::string, KeyInfo>& key_table() {
    static const std::map<std::string, KeyInfo> table = {
        FLCHAIN_NUM("block_interval", "BI", block_interval),
        FLCHAIN_COUNT("max_txs_per_block", "N_t", max_txs_per_block, std::size_t),
        FLCHAIN_NUM("tx_bits", "L_t", tx_bits),
        FLCHAIN_NUM("header_bits", "L_bh", header_bits),
        FLCHAIN_COUNT("miners", "M", miners, std::uint32_t),
        FLCHAIN_NUM("link_capacity", "C_link", link_capacity),
        FLCHAIN_NUM("client_capacity", "C_client", client_capacity),
        FLCHAIN_COUNT("clients", "K", clients, std::uint32_t),
        FLCHAIN_COUNT("epochs", "E", epochs, std::size_t),
        FLCHAIN_COUNT("batch_size", "B", batch_size, std::size_t),
        FLCHAIN_NUM("learning_rate", "eta", learning_rate),
        FLCHAIN_NUM("compute_power", "rho", compute_power),
        FLCHAIN_NUM("instructions_per_sample_epoch", "cost", instructions_per_sample_epoch),
        FLCHAIN_COUNT("stop_depth", "N_b", stop_depth, std::uint32_t),
        FLCHAIN_COUNT("features", "f", task.features, std::size_t),
        FLCHAIN_COUNT("classes", "C", task.classes, std::size_t),
        FLCHAIN_COUNT("train_samples", "n_train", task.train_samples, std::size_t),
        FLCHAIN_COUNT("heldout_samples", "n_heldout", task.heldout_samples, std::size_t),
        FLCHAIN_NUM("validation_share", "val", task.validation_share),
        FLCHAIN_NUM("class_separation", "sep", task.class_separation),
        FLCHAIN_NUM("noise_std", "sigma", task.noise_std),
        FLCHAIN_NUM("regression_tolerance", "tol", task.regression_tolerance),
        FLCHAIN_NUM("noniid_skew", "skew", task.noniid_skew),
        FLCHAIN_NUM("init_scale", "init", init_scale),
        FLCHAIN_COUNT("seed", "seed", seed, std::uint64_t),
        FLCHAIN_NUM("drain_deadline", "drain", drain_deadline),
        FLCHAIN_NUM("client_idle_time", "idle", client_idle_time),
        FLCHAIN_NUM("client_start_jitter", "jitter", client_start_jitter),
        {"miner_powers",
         KeyInfo{"xi",
                 [](ScenarioConfig& c, const json& v) {
                     if (!v.is_array()) throw ConfigError("config key 'miner_powers' must be a list of numbers");
                     c.miner_powers.clear();
                     for (const auto& p : v) c.miner_powers.push_back(as_number("miner_powers", p));
                 },
                 [](const ScenarioConfig& c) { return json(c.miner_powers); }}},
        {"task",
         KeyInfo{"task", [](ScenarioConfig& c, const json& v) {
                     try {
                         c.task.kind = parse_task_kind(as_string("task", v));
                     } catch (const std::invalid_argument& e) {
                         throw ConfigError(std::string("config key 'task': ") + e.what());
                     }
                 },
                 [](const ScenarioConfig& c) { return json(to_string(c.task.kind)); }}},
        {"attachment",
         KeyInfo{"attachment",
                 [](ScenarioConfig& c, const json& v) {
                     const auto s = as_string("attachment", v);
                     if (s == "random") c.attachment = AttachmentPolicy::Random;
                     else if (s == "round_robin") c.attachment = AttachmentPolicy::RoundRobin;
                     else throw ConfigError("config key 'attachment' must be 'random' or 'round_robin'");
                 },
                 [](const ScenarioConfig& c) {
                     return json(c.attachment == AttachmentPolicy::Random ? "random" : "round_robin");
                 }}},
        {"pull_policy",
         KeyInfo{"pull_policy",
                 [](ScenarioConfig& c, const json& v) {
                     const auto s = as_string("pull_policy", v);
                     if (s == "continuous") c.pull_policy = PullPolicy::Continuous;
                     else if (s == "await_inclusion") c.pull_policy = PullPolicy::AwaitInclusion;
                     else throw ConfigError("config key 'pull_policy' must be 'continuous' or 'await_inclusion'");
                 },
                 [](const ScenarioConfig& c) {
                     return json(c.pull_policy == PullPolicy::Continuous ? "continuous" : "await_inclusion");
                 }}},
        {"pull_model", KeyInfo{"pull", [](ScenarioConfig& c, const json& v) { c.pull_model = as_bool("pull_model", v); },
                               [](const ScenarioConfig& c) { return json(c.pull_model); }}},
        {"zero_delays",
         KeyInfo{"zero_delays", [](ScenarioConfig& c, const json& v) { c.zero_delays = as_bool("zero_delays", v); },
                 [](const ScenarioConfig& c) { return json(c.zero_delays); }}},
    };
    return table;
}

#undef FLCHAIN_NUM
#undef FLCHAIN_COUNT

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string label(const std::string& key) {
    const auto& sym = key_table().at(key).symbol;
    return sym == key ? "'" + key + "'" : "'" + key + "' (" + sym + ")";
}

void require_positive(const std::string& key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "config key " << label(key) << " must be positive, got " << v;
        throw ConfigError(os.str());
    }
}

void require_non_negative(const std::string& key, double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "config key " << label(key) << " must be non-negative, got " << v;
        throw ConfigError(os.str());
    }
}

}  // namespace

void ScenarioConfig::validate() const {
    require_positive("block_interval", block_interval);
    require_positive("max_txs_per_block", static_cast<double>(max_txs_per_block));
    require_non_negative("tx_bits", tx_bits);
    require_positive("header_bits", header_bits);
    require_positive("miners", miners);
    require_positive("link_capacity", link_capacity);
    require_non_negative("client_capacity", client_capacity);
    require_positive("clients", clients);
    require_positive("epochs", static_cast<double>(epochs));
    require_positive("batch_size", static_cast<double>(batch_size));
    require_positive("learning_rate", learning_rate);
    require_positive("compute_power", compute_power);
    require_positive("instructions_per_sample_epoch", instructions_per_sample_epoch);
    require_positive("stop_depth", stop_depth);
    require_positive("features", static_cast<double>(task.features));
    require_positive("train_samples", static_cast<double>(task.train_samples));
    require_non_negative("heldout_samples", static_cast<double>(task.heldout_samples));
    require_positive("class_separation", task.class_separation);
    require_non_negative("noise_std", task.noise_std);
    require_positive("regression_tolerance", task.regression_tolerance);
    require_non_negative("init_scale", init_scale);
    require_non_negative("drain_deadline", drain_deadline);
    require_non_negative("client_idle_time", client_idle_time);
    require_non_negative("client_start_jitter", client_start_jitter);
    if (task.kind == TaskKind::LogisticBlobs && task.classes < 2) {
        throw ConfigError("config key 'classes' must be at least 2 for classification");
    }
    if (task.validation_share < 0.0 || task.validation_share > 1.0) {
        throw ConfigError("config key 'validation_share' must lie in [0, 1]");
    }
    if (task.noniid_skew < 0.0 || task.noniid_skew > 1.0) {
        throw ConfigError("config key 'noniid_skew' must lie in [0, 1]");
    }
    if (task.train_samples < clients) {
        throw ConfigError("config key 'train_samples' must be at least 'clients' (K)");
    }
    if (!miner_powers.empty()) {
        if (miner_powers.size() != miners) {
            throw ConfigError("config key 'miner_powers' (xi) must list one power per miner");
        }
        for (double p : miner_powers) require_positive("miner_powers", p);
    }
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, info] : key_table()) k.push_back(name);
        k.push_back("degenerate");
        std::sort(k.begin(), k.end());
        return k;
    }();
    return keys;
}

std::string closest_key(const std::string& key) {
    std::string best;
    std::size_t best_d = SIZE_MAX;
    for (const auto& k : config_keys()) {
        const std::size_t d = edit_distance(key, k);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

json to_json(const ScenarioConfig& cfg) {
    json j = json::object();
    for (const auto& [key, info] : key_table()) j[key] = info.get(cfg);
    return j;
}

ScenarioConfig parse_config(const json& overrides, const ScenarioConfig& base) {
    if (!overrides.is_object()) throw ConfigError("configuration document must be a JSON object");
    ScenarioConfig cfg = base;
    const auto& table = key_table();
    bool make_degenerate = false;
    for (const auto& [key, value] : overrides.items()) {
        if (key == "degenerate") {
            make_degenerate = as_bool(key, value);
            continue;
        }
        auto it = table.find(key);
        if (it == table.end()) {
            throw ConfigError("unknown config key '" + key + "'; did you mean '" + closest_key(key) + "'?");
        }
        it->second.set(cfg, value);
    }
    if (make_degenerate) cfg = cfg.degenerate();
    cfg.validate();
    return cfg;
}

ScenarioConfig parse_config_text(const std::string& text, const ScenarioConfig& base) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
    }
    return parse_config(doc, base);
}

ScenarioConfig load_config(const std::string& path, const ScenarioConfig& base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), base);
}

std::string config_hash(const ScenarioConfig& cfg) {
    json j = to_json(cfg);
    j.erase("seed");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
    return buf;
}

std::vector<std::pair<std::string, std::string>> config_columns(const ScenarioConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> cols;
    const json doc = to_json(cfg);
    for (const auto& [key, value] : doc.items()) {
        std::string text;
        if (value.is_string()) {
            text = value.get<std::string>();
        } else if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i) text += (i ? ";" : "") + value[i].dump();
        } else {
            text = value.dump();
        }
        cols.emplace_back(key, std::move(text));
    }
    return cols;
}

}  // namespace flchain
