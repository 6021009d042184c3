#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rsf/dataset.hpp"
#include "rsf/distances.hpp"
#include "rsf/rng.hpp"
#include "rsf/value.hpp"

namespace rsf {

// Gini impurity of a node holding c0 / c1 examples of each class.
double gini_impurity(std::uint64_t c0, std::uint64_t c1);

// Size-weighted mean impurity of two children; both must be non-empty.
double weighted_gini(std::uint64_t l0, std::uint64_t l1, std::uint64_t r0, std::uint64_t r1);

// A fitted node split. Exemplar values are copies, so the model stays
// self-contained once training data is dropped; p_index / q_index record the
// training rows they came from and are only meaningful in-run.
struct SplitCandidate {
    std::size_t feature_index = 0;
    FeatureValue exemplar_p;
    FeatureValue exemplar_q;
    std::size_t p_index = 0;
    std::size_t q_index = 0;
    double threshold = 0.0;
    double impurity = 0.0;
    std::uint64_t balance = 0;
};

struct ThresholdChoice {
    double threshold = 0.0;
    double impurity = 0.0;
    std::uint64_t balance = 0;
};

// Training counters, shared across worker threads.
struct TrainTelemetry {
    std::atomic<std::uint64_t> nodes_searched{0};
    std::atomic<std::uint64_t> projections_built{0};
    std::atomic<std::uint64_t> thresholds_evaluated{0};
    std::atomic<std::uint64_t> candidates_found{0};
    // number of evaluated splits whose weighted child impurity exceeded the
    // parent impurity under exact integer arithmetic
    std::atomic<std::uint64_t> concavity_violations{0};
};

// Picks the best "projection <= thr" split: every unique projection value
// except the maximum is a candidate; lowest weighted Gini wins, ties go to the
// smaller child-size imbalance, remaining ties to the smallest threshold.
// Returns nullopt when fewer than two unique values exist.
std::optional<ThresholdChoice> best_threshold(std::span<const double> projection,
                                              std::span<const std::uint8_t> labels,
                                              TrainTelemetry* telemetry = nullptr);

// delta(x_q, x_i) - delta(x_p, x_i) for each indexed example. `fast_numeric`
// skips measure dispatch on numeric/euclidean columns; it produces bit-equal
// values to the general route.
std::vector<double> project_onto_pair(const DistanceCache& cache, std::size_t column,
                                      std::size_t p, std::size_t q,
                                      std::span<const std::size_t> indices, bool fast_numeric);

// Draws an exemplar pair for one feature: x_p from the class with the smaller
// within-class dispersion on this feature, x_q from the other class with a
// structurally different value. Gives up after a bounded number of redraws.
std::optional<std::pair<std::size_t, std::size_t>> select_exemplar_pair(
    const Dataset& ds, const DistanceCache& cache, std::size_t column,
    std::span<const std::size_t> indices, Rng& rng);

struct SplitterParams {
    std::uint32_t max_features = 1;  // resolved count, in [1, p]
    std::uint32_t max_pairs = 1;
    bool numeric_fast_path = true;
};

// Samples features without replacement among those with variation on the
// node, draws exemplar pairs, and returns the best candidate under the
// (impurity, balance, first-seen) order. Requires an impure node.
std::optional<SplitCandidate> find_best_split(const Dataset& ds, const DistanceCache& cache,
                                              std::span<const std::size_t> indices,
                                              const SplitterParams& params, Rng& rng,
                                              TrainTelemetry* telemetry = nullptr);

}  // namespace rsf
