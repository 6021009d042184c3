#include "rsf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "model_json.hpp"
#include "rsf/error.hpp"

namespace rsf {

double auc_score(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    if (scores.size() != labels.size()) throw DataError("auc: scores and labels differ in length");
    std::size_t n_pos = 0, n_neg = 0;
    for (auto y : labels) (y == 1 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) throw DataError("auc: single-class input");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // midranks over tie groups; rank sums of halves stay exact in doubles
    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) positive_rank_sum += midrank;
        }
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
    return u / (np * static_cast<double>(n_neg));
}

std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const std::uint8_t> label_ids,
                                                       std::size_t k, Rng& rng) {
    if (k < 2) throw DataError("stratified_kfold: k must be >= 2");
    std::vector<std::size_t> members[2];
    for (std::size_t i = 0; i < label_ids.size(); ++i) members[label_ids[i]].push_back(i);

    for (int c = 0; c < 2; ++c) {
        if (members[c].size() < k) {
            throw DataError("stratified_kfold: class " + std::to_string(c) + " has " +
                            std::to_string(members[c].size()) + " members, fewer than k = " +
                            std::to_string(k));
        }
    }

    std::vector<std::vector<std::size_t>> folds(k);
    for (int c = 0; c < 2; ++c) {
        rng.shuffle(std::span<std::size_t>(members[c]));
        for (std::size_t i = 0; i < members[c].size(); ++i) {
            folds[i % k].push_back(members[c][i]);
        }
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

EvalReport repeated_cv(const Dataset& ds, const Hyperparams& hp, std::uint32_t reps,
                       std::uint32_t k, std::uint64_t seed, unsigned workers,
                       TrainTelemetry* telemetry) {
    if (reps < 1) throw DataError("repeated_cv: reps must be >= 1");
    validate_dataset(ds);

    DistanceCache cache(ds);

    EvalReport report;
    report.hyperparams = hp;
    report.repetitions = reps;
    report.folds = k;
    report.seed = seed;
    report.positive_class = ds.class_values[1];

    const std::size_t n = ds.n_examples();
    for (std::uint32_t r = 0; r < reps; ++r) {
        Rng fold_rng(substream_seed(seed, {r}));
        const auto folds = stratified_kfold(ds.label_ids, k, fold_rng);
        for (std::uint32_t f = 0; f < k; ++f) {
            const auto& test_rows = folds[f];
            std::vector<std::uint8_t> in_test(n, 0);
            for (std::size_t idx : test_rows) in_test[idx] = 1;
            std::vector<std::size_t> train_rows;
            train_rows.reserve(n - test_rows.size());
            for (std::size_t i = 0; i < n; ++i) {
                if (!in_test[i]) train_rows.push_back(i);
            }

            Hyperparams fold_hp = hp;
            fold_hp.seed = substream_seed(seed, {r, f});
            const ForestModel model =
                fit_on_rows(ds, fold_hp, train_rows, workers, telemetry, &cache);

            const auto proba = predict_proba_rows(model, ds, test_rows, cache);
            std::vector<double> scores(test_rows.size());
            std::vector<std::uint8_t> labels(test_rows.size());
            for (std::size_t i = 0; i < test_rows.size(); ++i) {
                scores[i] = proba[i][1];
                labels[i] = ds.label_ids[test_rows[i]];
            }
            report.fold_aucs.push_back({r, f, auc_score(scores, labels)});
        }
    }

    double sum = 0.0;
    for (const auto& fa : report.fold_aucs) sum += fa.auc;
    report.mean_auc = sum / static_cast<double>(report.fold_aucs.size());
    double ss = 0.0;
    for (const auto& fa : report.fold_aucs) {
        const double d = fa.auc - report.mean_auc;
        ss += d * d;
    }
    report.std_auc = report.fold_aucs.size() > 1
                         ? std::sqrt(ss / static_cast<double>(report.fold_aucs.size() - 1))
                         : 0.0;
    return report;
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["dataset"] = report.dataset;
    j["hyperparams"] = hyperparams_to_json(report.hyperparams);
    j["repetitions"] = report.repetitions;
    j["folds"] = report.folds;
    j["seed"] = report.seed;
    j["positive_class"] = report.positive_class;
    j["mean_auc"] = report.mean_auc;
    j["std_auc"] = report.std_auc;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& fa : report.fold_aucs) {
        entries.push_back({{"repetition", fa.repetition}, {"fold", fa.fold}, {"auc", fa.auc}});
    }
    j["fold_aucs"] = std::move(entries);
    return j.dump(2) + "\n";
}

}  // namespace rsf
