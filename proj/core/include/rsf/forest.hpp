#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rsf/dataset.hpp"
#include "rsf/distances.hpp"
#include "rsf/rng.hpp"
#include "rsf/tree.hpp"

namespace rsf {

// Seed used by the CLI and generators when none is given.
inline constexpr std::uint64_t kDefaultSeed = 42;

// Number of candidate features per node: either a fraction of p (resolved as
// ceil(fraction * p)) or an absolute count, both clamped to [1, p].
struct MaxFeatures {
    bool is_fraction = true;
    double fraction = 0.5;
    std::uint32_t count = 0;

    static MaxFeatures from_fraction(double f) { return {true, f, 0}; }
    static MaxFeatures from_count(std::uint32_t k) { return {false, 0.0, k}; }

    std::uint32_t resolve(std::size_t p) const;
};

struct Hyperparams {
    std::uint32_t max_trees = 100;
    MaxFeatures max_features = MaxFeatures::from_fraction(0.5);
    std::uint32_t max_pairs = 1;
    StoppingRule stopping;
    std::uint64_t seed = kDefaultSeed;
    // Exists so the optimized and general numeric routes can be compared;
    // both select identical splits.
    bool numeric_fast_path = true;
};

struct ColumnMeta {
    std::string name;
    ValueKind kind = ValueKind::Numeric;
    std::string measure;
};

struct ForestModel {
    Hyperparams hyperparams;
    std::vector<std::string> class_values;  // two entries, sorted ascending
    std::vector<ColumnMeta> columns;
    std::vector<std::unique_ptr<TreeNode>> trees;
};

// n uniform draws with replacement from [0, n).
std::vector<std::size_t> bootstrap_sample(std::size_t n, Rng& rng);

// Trains max_trees trees, each on a bootstrap sample drawn from an rng
// substream keyed by (seed, tree index). The result is a pure function of
// (ds, hp) for any worker count.
ForestModel fit(const Dataset& ds, const Hyperparams& hp, unsigned workers = 1,
                TrainTelemetry* telemetry = nullptr);

// Same, but bootstraps are drawn from `train_rows` only (used by
// cross-validation). `shared_cache` may be a cache over `ds` reused across
// calls; when null a private cache is built.
ForestModel fit_on_rows(const Dataset& ds, const Hyperparams& hp,
                        std::span<const std::size_t> train_rows, unsigned workers = 1,
                        TrainTelemetry* telemetry = nullptr,
                        const DistanceCache* shared_cache = nullptr);

// Binds a model to a dataset being scored: checks the schema against the
// model's column metadata and precomputes exemplar probes for every split.
class Predictor {
public:
    Predictor(const ForestModel& model, const Dataset& ds);

    std::array<double, 2> predict_row(std::size_t row) const;          // mean over trees
    std::array<double, 2> predict_row_tree(std::size_t tree, std::size_t row) const;

private:
    const ForestModel* model_;
    std::vector<ColumnEvaluator> evaluators_;
    std::unordered_map<const TreeNode*, std::pair<ColumnEvaluator::Probe, ColumnEvaluator::Probe>>
        probes_;
};

// Unweighted mean of per-tree leaf frequencies; rows sum to 1.
std::vector<std::array<double, 2>> predict_proba(const ForestModel& model, const Dataset& ds);

// Argmax class per example; ties go to the lexicographically smaller class.
std::vector<std::string> predict(const ForestModel& model, const Dataset& ds);

// Index-routed scoring for models fitted on `ds` itself (exemplar row
// provenance intact), so cross-validation reuses the shared distance cache.
std::vector<std::array<double, 2>> predict_proba_rows(const ForestModel& model, const Dataset& ds,
                                                      std::span<const std::size_t> rows,
                                                      const DistanceCache& cache);

}  // namespace rsf
