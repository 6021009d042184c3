#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsf/value.hpp"

namespace rsf {

// Dense square matrix of pairwise distances backing a precomputed column.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    std::size_t size() const { return n_; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

// One dataset column: n values of a single kind plus the name of the distance
// measure used to compare them. `matrix` is present iff kind == Precomputed.
struct FeatureColumn {
    std::string name;
    ValueKind kind = ValueKind::Numeric;
    std::vector<FeatureValue> values;
    std::string measure;
    std::optional<SquareMatrix> matrix;
};

// Immutable after construction; safe to share across concurrent tree builders.
struct Dataset {
    std::vector<FeatureColumn> columns;
    std::vector<std::string> labels;
    std::vector<std::string> class_values;  // distinct labels, sorted ascending
    std::vector<std::uint8_t> label_ids;    // labels mapped to {0, 1}; empty unless binary

    std::size_t n_examples() const { return labels.size(); }
    std::size_t n_features() const { return columns.size(); }
};

// Assembles a Dataset and derives the class index. Never throws on invariant
// violations; run validate_dataset to check them.
Dataset make_dataset(std::vector<FeatureColumn> columns, std::vector<std::string> labels);

// All invariant violations, one message each; empty means the dataset is valid.
std::vector<std::string> dataset_violations(const Dataset& ds);

// Throws DataError listing every violation found.
void validate_dataset(const Dataset& ds);

// Structural difference between examples i and j on one column. Precomputed
// values compare by their matrix rows restricted to `context` (the examples
// currently in scope); other kinds ignore `context`.
bool values_distinct(const FeatureColumn& column, std::size_t i, std::size_t j,
                     std::span<const std::size_t> context);

// True when the indexed examples hold at least two structurally distinct
// values. Throws DataError on empty or out-of-bounds indices.
bool has_variation(const FeatureColumn& column, std::span<const std::size_t> indices);

}  // namespace rsf
