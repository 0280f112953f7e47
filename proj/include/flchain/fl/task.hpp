#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flchain/engine/rng.hpp"
#include "flchain/fl/model.hpp"

namespace flchain {

enum class TaskKind : std::uint8_t { LinearRegression, LogisticBlobs };

std::string to_string(TaskKind kind);
TaskKind parse_task_kind(const std::string& name);

/// Row-major feature matrix plus targets. Classification tasks store the
/// class index in `labels`; regression tasks store real targets in `targets`.
struct Dataset {
    std::size_t features = 0;
    std::vector<double> x;
    std::vector<double> targets;
    std::vector<int> labels;

    std::size_t size() const { return features == 0 ? 0 : x.size() / features; }
    std::span<const double> row(std::size_t i) const { return {x.data() + i * features, features}; }
    Dataset subset(std::span<const std::size_t> indices) const;
};

struct TaskSpec {
    TaskKind kind = TaskKind::LogisticBlobs;
    std::size_t features = 16;
    std::size_t classes = 10;         // classification only
    std::size_t train_samples = 5000;  // n_total, partitioned across clients
    std::size_t heldout_samples = 2000;
    double validation_share = 0.7;    // of the held-out set; rest is test
    double class_separation = 1.0;    // std of class means around the origin
    double noise_std = 0.5;           // regression target noise
    double regression_tolerance = 1.0;
    double noniid_skew = 0.0;         // 0 = IID shards, 1 = label-sorted shards
};

/// A desk-scale supervised problem: loss, gradient, prediction rule and the
/// train/validation/test split.
class LearningTask {
public:
    LearningTask(TaskSpec spec, Dataset train, Dataset validation, Dataset test);

    const TaskSpec& spec() const { return spec_; }
    TaskKind kind() const { return spec_.kind; }
    std::size_t features() const { return spec_.features; }
    std::size_t classes() const { return spec_.kind == TaskKind::LogisticBlobs ? spec_.classes : 0; }
    std::size_t dimension() const;

    const Dataset& train() const { return train_; }
    const Dataset& validation() const { return validation_; }
    const Dataset& test() const { return test_; }

    double train_fraction() const;
    double validation_fraction() const;
    double test_fraction() const;

    /// Mean loss over the selected rows of `data`.
    double loss(const ModelParams& w, const Dataset& data, std::span<const std::size_t> rows) const;
    /// Mean-loss gradient over the selected rows; `grad` must have size d.
    /// Returns the mean loss as a by-product.
    double gradient(const ModelParams& w, const Dataset& data, std::span<const std::size_t> rows,
                    std::span<double> grad) const;

    double loss(const ModelParams& w, const Dataset& data) const;
    void gradient(const ModelParams& w, const Dataset& data, std::span<double> grad) const;

    bool correct(const ModelParams& w, const Dataset& data, std::size_t row) const;
    int predict_class(const ModelParams& w, std::span<const double> x) const;
    double predict_value(const ModelParams& w, std::span<const double> x) const;

    /// Small random initial model (genesis).
    ModelParams initial_model(RngStream& rng, double scale) const;

private:
    TaskSpec spec_;
    Dataset train_;
    Dataset validation_;
    Dataset test_;
};

/// Fraction of correct predictions; throws on empty data.
double evaluate_accuracy(const LearningTask& task, const ModelParams& w, const Dataset& data);
double evaluate_accuracy(const LearningTask& task, const ModelParams& w, const Dataset& data,
                         std::span<const std::size_t> rows);

/// Indices into the training set held by one client.
struct Shard {
    std::vector<std::size_t> rows;
    std::size_t size() const { return rows.size(); }
};

struct TaskBundle {
    LearningTask task;
    std::vector<Shard> shards;
};

/// Deterministic synthetic dataset plus a K-way partition of the training
/// set (sizes n/K, remainder spread over the last shards).
TaskBundle generate_task(const TaskSpec& spec, std::uint64_t seed, std::size_t clients);

/// Per-class sample counts of a shard (empty for regression).
std::vector<std::size_t> class_histogram(const LearningTask& task, const Shard& shard);

}  // namespace flchain
