#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>

#include "rsf/dataset.hpp"
#include "rsf/distances.hpp"
#include "rsf/rng.hpp"
#include "rsf/splitter.hpp"

namespace rsf {

// Pre-pruning controls; the rules compose conjunctively and all default to
// "grow to purity".
struct StoppingRule {
    std::optional<std::uint32_t> max_depth;
    std::uint32_t min_samples_split = 2;
    std::uint32_t min_samples_leaf = 1;
};

// Internal nodes carry a split and two children; leaves carry the class
// counts of the examples that reached them. Immutable once built.
struct TreeNode {
    std::array<std::uint64_t, 2> class_counts{0, 0};
    std::uint32_t depth = 0;
    std::optional<SplitCandidate> split;
    std::unique_ptr<TreeNode> left;
    std::unique_ptr<TreeNode> right;

    bool is_leaf() const { return !split.has_value(); }
};

// Recursively grows a tree on the given bootstrap multiset of example rows.
// A node becomes a leaf when it is pure, a stopping rule fires, no usable
// split exists, or the best split would leave a child below min_samples_leaf.
std::unique_ptr<TreeNode> build_tree(const Dataset& ds, const DistanceCache& cache,
                                     std::span<const std::size_t> indices,
                                     const SplitterParams& params, const StoppingRule& stopping,
                                     Rng& rng, TrainTelemetry* telemetry = nullptr);

// Leaf class counts normalized to probabilities.
std::array<double, 2> leaf_probabilities(const TreeNode& leaf);

// Routes one example through the tree by projecting it against each node's
// stored exemplars: left iff delta(x_q, x) - delta(x_p, x) <= threshold.
// `evaluators` are bound to the columns the example row belongs to.
std::array<double, 2> predict_tree(const TreeNode& root,
                                   std::span<const ColumnEvaluator> evaluators, std::size_t row);

// Index-based routing against the training dataset itself; valid only for
// trees built on `cache`'s dataset (exemplar row provenance intact).
std::array<double, 2> predict_tree_by_index(const TreeNode& root, const DistanceCache& cache,
                                            std::size_t row, bool fast_numeric);

}  // namespace rsf
