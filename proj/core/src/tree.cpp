#include "rsf/tree.hpp"

#include <cmath>
#include <vector>

#include "rsf/error.hpp"

namespace rsf {

namespace {

std::unique_ptr<TreeNode> grow(const Dataset& ds, const DistanceCache& cache,
                               std::vector<std::size_t> indices, const SplitterParams& params,
                               const StoppingRule& stopping, std::uint32_t depth, Rng& rng,
                               TrainTelemetry* telemetry) {
    auto node = std::make_unique<TreeNode>();
    node->depth = depth;
    for (std::size_t idx : indices) ++node->class_counts[ds.label_ids[idx]];

    const bool pure = node->class_counts[0] == 0 || node->class_counts[1] == 0;
    const bool too_small = indices.size() < stopping.min_samples_split;
    const bool at_max_depth = stopping.max_depth && depth >= *stopping.max_depth;
    if (pure || too_small || at_max_depth) return node;

    auto split = find_best_split(ds, cache, indices, params, rng, telemetry);
    if (!split) return node;

    const auto projection = project_onto_pair(cache, split->feature_index, split->p_index,
                                              split->q_index, indices, params.numeric_fast_path);
    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        (projection[k] <= split->threshold ? left_rows : right_rows).push_back(indices[k]);
    }
    if (left_rows.size() < stopping.min_samples_leaf ||
        right_rows.size() < stopping.min_samples_leaf) {
        return node;
    }

    indices.clear();
    indices.shrink_to_fit();
    node->split = std::move(*split);
    node->left = grow(ds, cache, std::move(left_rows), params, stopping, depth + 1, rng, telemetry);
    node->right =
        grow(ds, cache, std::move(right_rows), params, stopping, depth + 1, rng, telemetry);
    return node;
}

}  // namespace

std::unique_ptr<TreeNode> build_tree(const Dataset& ds, const DistanceCache& cache,
                                     std::span<const std::size_t> indices,
                                     const SplitterParams& params, const StoppingRule& stopping,
                                     Rng& rng, TrainTelemetry* telemetry) {
    if (indices.empty()) throw DataError("build_tree: empty index set");
    return grow(ds, cache, {indices.begin(), indices.end()}, params, stopping, 0, rng, telemetry);
}

std::array<double, 2> leaf_probabilities(const TreeNode& leaf) {
    const auto total = leaf.class_counts[0] + leaf.class_counts[1];
    if (total == 0) throw Error("leaf with no examples");
    return {static_cast<double>(leaf.class_counts[0]) / static_cast<double>(total),
            static_cast<double>(leaf.class_counts[1]) / static_cast<double>(total)};
}

std::array<double, 2> predict_tree(const TreeNode& root,
                                   std::span<const ColumnEvaluator> evaluators, std::size_t row) {
    const TreeNode* node = &root;
    while (!node->is_leaf()) {
        const SplitCandidate& split = *node->split;
        const ColumnEvaluator& ev = evaluators[split.feature_index];
        const double projection = ev.probe_to_row(ev.make_probe(split.exemplar_q), row) -
                                  ev.probe_to_row(ev.make_probe(split.exemplar_p), row);
        node = projection <= split.threshold ? node->left.get() : node->right.get();
    }
    return leaf_probabilities(*node);
}

std::array<double, 2> predict_tree_by_index(const TreeNode& root, const DistanceCache& cache,
                                            std::size_t row, bool fast_numeric) {
    const TreeNode* node = &root;
    while (!node->is_leaf()) {
        const SplitCandidate& split = *node->split;
        const std::size_t rows[1] = {row};
        const double projection = project_onto_pair(cache, split.feature_index, split.p_index,
                                                    split.q_index, rows, fast_numeric)[0];
        node = projection <= split.threshold ? node->left.get() : node->right.get();
    }
    return leaf_probabilities(*node);
}

}  // namespace rsf
