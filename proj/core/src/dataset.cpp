#include "rsf/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rsf/distances.hpp"
#include "rsf/error.hpp"

namespace rsf {

Dataset make_dataset(std::vector<FeatureColumn> columns, std::vector<std::string> labels) {
    Dataset ds;
    ds.columns = std::move(columns);
    ds.labels = std::move(labels);

    std::set<std::string> distinct(ds.labels.begin(), ds.labels.end());
    ds.class_values.assign(distinct.begin(), distinct.end());
    if (ds.class_values.size() == 2) {
        ds.label_ids.reserve(ds.labels.size());
        for (const auto& label : ds.labels) {
            ds.label_ids.push_back(label == ds.class_values[1] ? 1 : 0);
        }
    }
    return ds;
}

namespace {

bool matrix_entry_ok(double v) { return std::isfinite(v) && v >= 0.0; }

void check_column(const FeatureColumn& col, std::size_t n, std::vector<std::string>& out) {
    const std::string where = "column '" + col.name + "'";
    try {
        resolve_measure(col.kind, col.measure);
    } catch (const DataError& e) {
        out.push_back(where + ": " + e.what());
    }
    if (col.values.size() != n) {
        out.push_back(where + ": has " + std::to_string(col.values.size()) + " values, expected " +
                      std::to_string(n));
    }
    for (std::size_t i = 0; i < col.values.size(); ++i) {
        const FeatureValue& v = col.values[i];
        const std::string record = where + " record " + std::to_string(i);
        if (kind_of(v) != col.kind) {
            out.push_back(record + ": value kind " + kind_name(kind_of(v)) +
                          " does not match column kind " + kind_name(col.kind));
            continue;
        }
        switch (col.kind) {
            case ValueKind::Numeric:
                if (!std::isfinite(std::get<double>(v))) out.push_back(record + ": non-finite value");
                break;
            case ValueKind::SetSeq: {
                const auto& seq = std::get<SetSequence>(v);
                for (std::size_t s = 0; s < seq.size(); ++s) {
                    if (seq[s].empty()) {
                        out.push_back(record + ": set " + std::to_string(s) + " is empty");
                    } else if (!std::is_sorted(seq[s].begin(), seq[s].end()) ||
                               std::adjacent_find(seq[s].begin(), seq[s].end()) != seq[s].end()) {
                        out.push_back(record + ": set " + std::to_string(s) + " is not canonical");
                    }
                }
                break;
            }
            case ValueKind::TimeSeries: {
                const auto& ts = std::get<TimeSeries>(v);
                if (ts.empty()) out.push_back(record + ": empty series");
                for (double x : ts) {
                    if (!std::isfinite(x)) {
                        out.push_back(record + ": non-finite sample");
                        break;
                    }
                }
                break;
            }
            case ValueKind::Graph: {
                const auto& g = std::get<GraphValue>(v);
                for (const auto& [u, w] : g.edges) {
                    if (u >= g.node_count || w >= g.node_count) {
                        out.push_back(record + ": edge endpoint outside [0, " +
                                      std::to_string(g.node_count) + ")");
                        break;
                    }
                    if (u == w) {
                        out.push_back(record + ": self-loop");
                        break;
                    }
                }
                if (!std::is_sorted(g.edges.begin(), g.edges.end()) ||
                    std::adjacent_find(g.edges.begin(), g.edges.end()) != g.edges.end()) {
                    out.push_back(record + ": edge list is not canonical");
                }
                break;
            }
            case ValueKind::Precomputed: {
                const auto& ref = std::get<PrecomputedRef>(v);
                if (!col.matrix || ref.row >= col.matrix->size()) {
                    out.push_back(record + ": row reference " + std::to_string(ref.row) +
                                  " outside the distance matrix");
                }
                break;
            }
        }
    }
    if (col.kind == ValueKind::Precomputed) {
        if (!col.matrix) {
            out.push_back(where + ": precomputed column lacks a distance matrix");
        } else {
            const SquareMatrix& m = *col.matrix;
            bool symmetric = true, zero_diag = true, nonneg = true;
            for (std::size_t i = 0; i < m.size() && (symmetric || zero_diag || nonneg); ++i) {
                if (std::abs(m(i, i)) > 1e-12) zero_diag = false;
                for (std::size_t j = i + 1; j < m.size(); ++j) {
                    if (std::abs(m(i, j) - m(j, i)) > 1e-12 * std::max(1.0, std::abs(m(i, j)))) {
                        symmetric = false;
                    }
                    if (!matrix_entry_ok(m(i, j)) || !matrix_entry_ok(m(j, i))) nonneg = false;
                }
            }
            if (!symmetric) out.push_back(where + ": matrix not symmetric");
            if (!zero_diag) out.push_back(where + ": matrix diagonal not zero");
            if (!nonneg) out.push_back(where + ": matrix has negative or non-finite entries");
        }
    } else if (col.matrix) {
        out.push_back(where + ": distance matrix attached to a non-precomputed column");
    }
}

}  // namespace

std::vector<std::string> dataset_violations(const Dataset& ds) {
    std::vector<std::string> out;
    const std::size_t n = ds.labels.size();
    if (n < 2) out.push_back("dataset has fewer than two examples");
    if (ds.columns.empty()) out.push_back("dataset has no feature columns");
    if (ds.class_values.size() != 2) {
        if (ds.class_values.size() < 2) {
            out.push_back("fewer than two classes");
        } else {
            out.push_back("binary classification only: found " +
                          std::to_string(ds.class_values.size()) + " classes");
        }
    }
    for (const auto& col : ds.columns) check_column(col, n, out);
    return out;
}

void validate_dataset(const Dataset& ds) {
    const auto violations = dataset_violations(ds);
    if (violations.empty()) return;
    std::string message = "invalid dataset:";
    for (const auto& v : violations) message += "\n  - " + v;
    throw DataError(message);
}

bool values_distinct(const FeatureColumn& column, std::size_t i, std::size_t j,
                     std::span<const std::size_t> context) {
    if (column.kind == ValueKind::Precomputed) {
        const SquareMatrix& m = *column.matrix;
        const std::size_t ri = std::get<PrecomputedRef>(column.values[i]).row;
        const std::size_t rj = std::get<PrecomputedRef>(column.values[j]).row;
        for (std::size_t k : context) {
            const std::size_t rk = std::get<PrecomputedRef>(column.values[k]).row;
            if (m(ri, rk) != m(rj, rk)) return true;
        }
        return false;
    }
    return !structurally_equal(column.values[i], column.values[j]);
}

bool has_variation(const FeatureColumn& column, std::span<const std::size_t> indices) {
    if (indices.empty()) throw DataError("has_variation: empty index set");
    for (std::size_t idx : indices) {
        if (idx >= column.values.size()) {
            throw DataError("has_variation: index " + std::to_string(idx) + " out of bounds");
        }
    }
    const std::size_t first = indices.front();
    for (std::size_t k = 1; k < indices.size(); ++k) {
        if (values_distinct(column, first, indices[k], indices)) return true;
    }
    return false;
}

}  // namespace rsf
