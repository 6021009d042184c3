#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rsf/dataset.hpp"
#include "rsf/forest.hpp"
#include "rsf/rng.hpp"

namespace rsf {

// Mann-Whitney AUC: the fraction of (positive, negative) pairs where the
// positive scores higher, counting ties as 1/2. Labels use 1 as positive.
double auc_score(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Disjoint folds covering [0, n) with per-class counts differing by at most
// one across folds. Every class must have at least k members.
std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const std::uint8_t> label_ids,
                                                       std::size_t k, Rng& rng);

struct FoldAuc {
    std::uint32_t repetition = 0;
    std::uint32_t fold = 0;
    double auc = 0.0;
};

struct EvalReport {
    std::string dataset;  // caller-supplied label
    Hyperparams hyperparams;
    std::uint32_t repetitions = 0;
    std::uint32_t folds = 0;
    std::uint64_t seed = 0;
    std::string positive_class;
    std::vector<FoldAuc> fold_aucs;
    double mean_auc = 0.0;
    double std_auc = 0.0;  // sample standard deviation over fold values
};

// Repeated stratified k-fold cross-validation. Fold assignment for
// repetition r uses substream (seed, r); the model trained against fold f
// uses hyperparameter seed substream (seed, r, f). Scores are the held-out
// examples' probabilities for the positive class (the lexicographically
// larger class value).
EvalReport repeated_cv(const Dataset& ds, const Hyperparams& hp, std::uint32_t reps,
                       std::uint32_t k, std::uint64_t seed, unsigned workers = 1,
                       TrainTelemetry* telemetry = nullptr);

// Deterministic JSON rendering of a report.
std::string report_to_json(const EvalReport& report);

}  // namespace rsf
