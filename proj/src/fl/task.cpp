#include "flchain/fl/task.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace flchain {

std::string to_string(TaskKind kind) {
    return kind == TaskKind::LinearRegression ? "linear-regression" : "logistic-blobs";
}

TaskKind parse_task_kind(const std::string& name) {
    if (name == "linear-regression" || name == "synthetic-linear-regression") return TaskKind::LinearRegression;
    if (name == "logistic-blobs" || name == "synthetic-logistic-blobs") return TaskKind::LogisticBlobs;
    throw std::invalid_argument("unknown task kind '" + name + "' (expected linear-regression or logistic-blobs)");
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.features = features;
    out.x.reserve(indices.size() * features);
    for (std::size_t i : indices) {
        auto r = row(i);
        out.x.insert(out.x.end(), r.begin(), r.end());
        if (!targets.empty()) out.targets.push_back(targets[i]);
        if (!labels.empty()) out.labels.push_back(labels[i]);
    }
    return out;
}

LearningTask::LearningTask(TaskSpec spec, Dataset train, Dataset validation, Dataset test)
    : spec_(spec), train_(std::move(train)), validation_(std::move(validation)), test_(std::move(test)) {}

std::size_t LearningTask::dimension() const {
    return spec_.kind == TaskKind::LogisticBlobs ? spec_.classes * (spec_.features + 1) : spec_.features + 1;
}

double LearningTask::train_fraction() const {
    const double n = static_cast<double>(train_.size() + validation_.size() + test_.size());
    return static_cast<double>(train_.size()) / n;
}
double LearningTask::validation_fraction() const {
    const double n = static_cast<double>(train_.size() + validation_.size() + test_.size());
    return static_cast<double>(validation_.size()) / n;
}
double LearningTask::test_fraction() const {
    const double n = static_cast<double>(train_.size() + validation_.size() + test_.size());
    return static_cast<double>(test_.size()) / n;
}

namespace {

double dot(std::span<const double> a, const double* b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Softmax probabilities into `p` (size C); returns log-sum-exp of the logits.
double softmax(const double* w, std::size_t classes, std::size_t f, std::span<const double> x, std::vector<double>& p) {
    const double* bias = w + classes * f;
    double mx = -INFINITY;
    for (std::size_t c = 0; c < classes; ++c) {
        p[c] = dot(x, w + c * f) + bias[c];
        mx = std::max(mx, p[c]);
    }
    double z = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
        p[c] = std::exp(p[c] - mx);
        z += p[c];
    }
    for (std::size_t c = 0; c < classes; ++c) p[c] /= z;
    return mx + std::log(z);
}

}  // namespace

double LearningTask::predict_value(const ModelParams& w, std::span<const double> x) const {
    const auto v = w.values();
    return dot(x, v.data()) + v[spec_.features];
}

int LearningTask::predict_class(const ModelParams& w, std::span<const double> x) const {
    const std::size_t f = spec_.features;
    const auto v = w.values();
    int best = 0;
    double best_score = -INFINITY;
    for (std::size_t c = 0; c < spec_.classes; ++c) {
        const double s = dot(x, v.data() + c * f) + v[spec_.classes * f + c];
        if (s > best_score) {
            best_score = s;
            best = static_cast<int>(c);
        }
    }
    return best;
}

bool LearningTask::correct(const ModelParams& w, const Dataset& data, std::size_t row) const {
    if (spec_.kind == TaskKind::LogisticBlobs) return predict_class(w, data.row(row)) == data.labels[row];
    return std::abs(predict_value(w, data.row(row)) - data.targets[row]) <= spec_.regression_tolerance;
}

double LearningTask::gradient(const ModelParams& w, const Dataset& data, std::span<const std::size_t> rows,
                              std::span<double> grad) const {
    if (grad.size() != dimension() || w.dim() != dimension()) {
        throw std::invalid_argument("gradient: dimension mismatch");
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    if (rows.empty()) return 0.0;
    const std::size_t f = spec_.features;
    const auto v = w.values();
    double total = 0.0;
    if (spec_.kind == TaskKind::LinearRegression) {
        for (std::size_t r : rows) {
            auto x = data.row(r);
            const double err = dot(x, v.data()) + v[f] - data.targets[r];
            total += 0.5 * err * err;
            for (std::size_t j = 0; j < f; ++j) grad[j] += err * x[j];
            grad[f] += err;
        }
    } else {
        const std::size_t classes = spec_.classes;
        std::vector<double> p(classes);
        for (std::size_t r : rows) {
            auto x = data.row(r);
            const double lse = softmax(v.data(), classes, f, x, p);
            const int y = data.labels[r];
            total += lse - (dot(x, v.data() + y * f) + v[classes * f + y]);
            for (std::size_t c = 0; c < classes; ++c) {
                const double g = p[c] - (static_cast<int>(c) == y ? 1.0 : 0.0);
                double* gw = grad.data() + c * f;
                for (std::size_t j = 0; j < f; ++j) gw[j] += g * x[j];
                grad[classes * f + c] += g;
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(rows.size());
    for (double& g : grad) g *= inv;
    return total * inv;
}

double LearningTask::loss(const ModelParams& w, const Dataset& data, std::span<const std::size_t> rows) const {
    if (rows.empty()) return 0.0;
    const std::size_t f = spec_.features;
    const auto v = w.values();
    double total = 0.0;
    if (spec_.kind == TaskKind::LinearRegression) {
        for (std::size_t r : rows) {
            const double err = dot(data.row(r), v.data()) + v[f] - data.targets[r];
            total += 0.5 * err * err;
        }
    } else {
        std::vector<double> p(spec_.classes);
        for (std::size_t r : rows) {
            auto x = data.row(r);
            const double lse = softmax(v.data(), spec_.classes, f, x, p);
            const int y = data.labels[r];
            total += lse - (dot(x, v.data() + y * f) + v[spec_.classes * f + y]);
        }
    }
    return total / static_cast<double>(rows.size());
}

namespace {
std::vector<std::size_t> all_rows(const Dataset& d) {
    std::vector<std::size_t> rows(d.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}
}  // namespace

double LearningTask::loss(const ModelParams& w, const Dataset& data) const { return loss(w, data, all_rows(data)); }

void LearningTask::gradient(const ModelParams& w, const Dataset& data, std::span<double> grad) const {
    gradient(w, data, all_rows(data), grad);
}

ModelParams LearningTask::initial_model(RngStream& rng, double scale) const {
    ModelParams w(dimension());
    for (auto& v : w.values()) v = scale * rng.normal();
    return w;
}

double evaluate_accuracy(const LearningTask& task, const ModelParams& w, const Dataset& data,
                         std::span<const std::size_t> rows) {
    if (rows.empty()) throw std::invalid_argument("evaluate_accuracy: empty data");
    std::size_t hits = 0;
    for (std::size_t r : rows) hits += task.correct(w, data, r) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(rows.size());
}

double evaluate_accuracy(const LearningTask& task, const ModelParams& w, const Dataset& data) {
    if (data.size() == 0) throw std::invalid_argument("evaluate_accuracy: empty data");
    std::size_t hits = 0;
    for (std::size_t r = 0; r < data.size(); ++r) hits += task.correct(w, data, r) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

namespace {

template <typename T>
void shuffle(std::vector<T>& v, RngStream& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.uniform_index(i)]);
}

}  // namespace

TaskBundle generate_task(const TaskSpec& spec, std::uint64_t seed, std::size_t clients) {
    if (clients == 0) throw std::invalid_argument("generate_task: need at least one client");
    if (spec.train_samples < clients) throw std::invalid_argument("generate_task: fewer training samples than clients");
    if (spec.features == 0) throw std::invalid_argument("generate_task: features must be positive");
    if (spec.kind == TaskKind::LogisticBlobs && spec.classes < 2) {
        throw std::invalid_argument("generate_task: classification needs at least two classes");
    }
    if (!(spec.validation_share >= 0.0 && spec.validation_share <= 1.0)) {
        throw std::invalid_argument("generate_task: validation_share must lie in [0, 1]");
    }

    RngStream rng("dataset", seed);
    const std::size_t f = spec.features;
    const std::size_t n = spec.train_samples + spec.heldout_samples;

    Dataset all;
    all.features = f;
    all.x.resize(n * f);
    if (spec.kind == TaskKind::LogisticBlobs) {
        std::vector<double> means(spec.classes * f);
        for (auto& m : means) m = spec.class_separation * rng.normal();
        all.labels.resize(n);
        for (std::size_t i = 0; i < n; ++i) all.labels[i] = static_cast<int>(i % spec.classes);
        shuffle(all.labels, rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double* mu = means.data() + static_cast<std::size_t>(all.labels[i]) * f;
            for (std::size_t j = 0; j < f; ++j) all.x[i * f + j] = mu[j] + rng.normal();
        }
    } else {
        std::vector<double> truth(f + 1);
        for (auto& t : truth) t = rng.normal();
        all.targets.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double y = truth[f];
            for (std::size_t j = 0; j < f; ++j) {
                const double xv = rng.normal();
                all.x[i * f + j] = xv;
                y += truth[j] * xv;
            }
            all.targets[i] = y + spec.noise_std * rng.normal();
        }
    }

    std::vector<std::size_t> train_idx(spec.train_samples), val_idx, test_idx;
    std::iota(train_idx.begin(), train_idx.end(), std::size_t{0});
    const auto n_val = static_cast<std::size_t>(std::llround(spec.validation_share * static_cast<double>(spec.heldout_samples)));
    for (std::size_t i = spec.train_samples; i < n; ++i) {
        (i - spec.train_samples < n_val ? val_idx : test_idx).push_back(i);
    }

    LearningTask task(spec, all.subset(train_idx), all.subset(val_idx), all.subset(test_idx));

    // Partition: IID = random permutation; skew s sorts a fraction s of the
    // samples by label so shards concentrate on few classes.
    const std::size_t n_train = spec.train_samples;
    RngStream part = rng.derive("partition");
    std::vector<std::size_t> order(n_train);
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order, part);
    if (spec.kind == TaskKind::LogisticBlobs && spec.noniid_skew > 0.0) {
        std::vector<std::size_t> key(n_train);
        for (std::size_t i = 0; i < n_train; ++i) {
            key[i] = part.uniform01() < spec.noniid_skew ? static_cast<std::size_t>(task.train().labels[i])
                                                         : part.uniform_index(spec.classes);
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
    }

    std::vector<Shard> shards(clients);
    const std::size_t base = n_train / clients;
    const std::size_t rem = n_train % clients;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < clients; ++k) {
        const std::size_t sz = base + (k >= clients - rem ? 1 : 0);
        shards[k].rows.assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                              order.begin() + static_cast<std::ptrdiff_t>(pos + sz));
        std::sort(shards[k].rows.begin(), shards[k].rows.end());
        pos += sz;
    }
    return TaskBundle{std::move(task), std::move(shards)};
}

std::vector<std::size_t> class_histogram(const LearningTask& task, const Shard& shard) {
    std::vector<std::size_t> hist(task.classes(), 0);
    if (task.kind() != TaskKind::LogisticBlobs) return hist;
    for (std::size_t r : shard.rows) ++hist[static_cast<std::size_t>(task.train().labels[r])];
    return hist;
}

}  // namespace flchain
