#include "rsf/forest.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rsf/error.hpp"

namespace rsf {

std::uint32_t MaxFeatures::resolve(std::size_t p) const {
    if (p == 0) throw DataError("max_features: dataset has no features");
    std::uint64_t k;
    if (is_fraction) {
        if (!(fraction > 0.0) || fraction > 1.0) {
            throw DataError("max_features fraction must be in (0, 1]");
        }
        k = static_cast<std::uint64_t>(std::ceil(fraction * static_cast<double>(p)));
    } else {
        k = count;
    }
    if (k < 1) k = 1;
    if (k > p) k = p;
    return static_cast<std::uint32_t>(k);
}

std::vector<std::size_t> bootstrap_sample(std::size_t n, Rng& rng) {
    if (n == 0) throw DataError("bootstrap_sample: empty population");
    std::vector<std::size_t> sample(n);
    for (std::size_t i = 0; i < n; ++i) {
        sample[i] = static_cast<std::size_t>(rng.uniform_index(n));
    }
    return sample;
}

ForestModel fit(const Dataset& ds, const Hyperparams& hp, unsigned workers,
                TrainTelemetry* telemetry) {
    std::vector<std::size_t> all(ds.n_examples());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return fit_on_rows(ds, hp, all, workers, telemetry, nullptr);
}

ForestModel fit_on_rows(const Dataset& ds, const Hyperparams& hp,
                        std::span<const std::size_t> train_rows, unsigned workers,
                        TrainTelemetry* telemetry, const DistanceCache* shared_cache) {
    validate_dataset(ds);
    if (train_rows.empty()) throw DataError("fit: empty training set");
    if (hp.max_trees < 1) throw DataError("max_trees must be >= 1");
    if (hp.max_pairs < 1) throw DataError("max_pairs must be >= 1");

    SplitterParams params;
    params.max_features = hp.max_features.resolve(ds.n_features());
    params.max_pairs = hp.max_pairs;
    params.numeric_fast_path = hp.numeric_fast_path;

    std::unique_ptr<DistanceCache> own_cache;
    if (!shared_cache) {
        own_cache = std::make_unique<DistanceCache>(ds);
        shared_cache = own_cache.get();
    }
    const DistanceCache& cache = *shared_cache;

    ForestModel model;
    model.hyperparams = hp;
    model.class_values = ds.class_values;
    model.columns.reserve(ds.columns.size());
    for (const auto& col : ds.columns) {
        model.columns.push_back({col.name, col.kind, col.measure});
    }
    model.trees.resize(hp.max_trees);

    // Each tree's randomness comes from a substream keyed by its index, so
    // the schedule of workers cannot affect the result.
    const auto build_one = [&](std::uint32_t t) {
        Rng rng(substream_seed(hp.seed, {t}));
        std::vector<std::size_t> rows(train_rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            rows[i] = train_rows[rng.uniform_index(train_rows.size())];
        }
        model.trees[t] = build_tree(ds, cache, rows, params, hp.stopping, rng, telemetry);
    };

    if (workers <= 1 || hp.max_trees == 1) {
        for (std::uint32_t t = 0; t < hp.max_trees; ++t) build_one(t);
    } else {
        std::atomic<std::uint32_t> next{0};
        std::mutex failure_mutex;
        std::exception_ptr failure;
        const unsigned count = std::min<unsigned>(workers, hp.max_trees);
        std::vector<std::thread> pool;
        pool.reserve(count);
        for (unsigned w = 0; w < count; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::uint32_t t = next.fetch_add(1);
                    if (t >= hp.max_trees) return;
                    try {
                        build_one(t);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }
    return model;
}

namespace {

void check_schema(const ForestModel& model, const Dataset& ds) {
    if (ds.columns.size() != model.columns.size()) {
        throw DataError("predict: dataset has " + std::to_string(ds.columns.size()) +
                        " columns, model expects " + std::to_string(model.columns.size()));
    }
    for (std::size_t c = 0; c < ds.columns.size(); ++c) {
        const auto& have = ds.columns[c];
        const auto& want = model.columns[c];
        if (have.kind != want.kind || have.measure != want.measure || have.name != want.name) {
            throw DataError("predict: column " + std::to_string(c) + " is ('" + have.name + "', " +
                            kind_name(have.kind) + ", '" + have.measure + "'), model expects ('" +
                            want.name + "', " + kind_name(want.kind) + ", '" + want.measure + "')");
        }
    }
}

}  // namespace

Predictor::Predictor(const ForestModel& model, const Dataset& ds) : model_(&model) {
    check_schema(model, ds);
    evaluators_.reserve(ds.columns.size());
    for (const auto& col : ds.columns) evaluators_.emplace_back(col);
    for (const auto& tree : model.trees) {
        std::vector<const TreeNode*> todo{tree.get()};
        while (!todo.empty()) {
            const TreeNode* node = todo.back();
            todo.pop_back();
            if (node->is_leaf()) continue;
            const auto& split = *node->split;
            const auto& ev = evaluators_[split.feature_index];
            probes_.emplace(node, std::make_pair(ev.make_probe(split.exemplar_p),
                                                 ev.make_probe(split.exemplar_q)));
            todo.push_back(node->left.get());
            todo.push_back(node->right.get());
        }
    }
}

std::array<double, 2> Predictor::predict_row_tree(std::size_t tree, std::size_t row) const {
    const TreeNode* node = model_->trees[tree].get();
    while (!node->is_leaf()) {
        const auto& split = *node->split;
        const auto& ev = evaluators_[split.feature_index];
        const auto& [probe_p, probe_q] = probes_.at(node);
        const double projection = ev.probe_to_row(probe_q, row) - ev.probe_to_row(probe_p, row);
        node = projection <= split.threshold ? node->left.get() : node->right.get();
    }
    return leaf_probabilities(*node);
}

std::array<double, 2> Predictor::predict_row(std::size_t row) const {
    std::array<double, 2> sum{0.0, 0.0};
    for (std::size_t t = 0; t < model_->trees.size(); ++t) {
        const auto p = predict_row_tree(t, row);
        sum[0] += p[0];
        sum[1] += p[1];
    }
    const auto n = static_cast<double>(model_->trees.size());
    return {sum[0] / n, sum[1] / n};
}

std::vector<std::array<double, 2>> predict_proba(const ForestModel& model, const Dataset& ds) {
    Predictor predictor(model, ds);
    std::vector<std::array<double, 2>> out(ds.n_examples());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = predictor.predict_row(i);
    return out;
}

std::vector<std::string> predict(const ForestModel& model, const Dataset& ds) {
    const auto proba = predict_proba(model, ds);
    std::vector<std::string> out;
    out.reserve(proba.size());
    for (const auto& p : proba) {
        out.push_back(model.class_values[p[1] > p[0] ? 1 : 0]);
    }
    return out;
}

std::vector<std::array<double, 2>> predict_proba_rows(const ForestModel& model, const Dataset& ds,
                                                      std::span<const std::size_t> rows,
                                                      const DistanceCache& cache) {
    check_schema(model, ds);
    const bool fast = model.hyperparams.numeric_fast_path;
    std::vector<std::array<double, 2>> out(rows.size());
    const auto n_trees = static_cast<double>(model.trees.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        std::array<double, 2> sum{0.0, 0.0};
        for (const auto& tree : model.trees) {
            const auto p = predict_tree_by_index(*tree, cache, rows[k], fast);
            sum[0] += p[0];
            sum[1] += p[1];
        }
        out[k] = {sum[0] / n_trees, sum[1] / n_trees};
    }
    return out;
}

}  // namespace rsf
