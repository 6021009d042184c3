#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rsf {

// Discriminates the payload of a FeatureValue and the element type of a column.
enum class ValueKind { Numeric, SetSeq, TimeSeries, Graph, Precomputed };

const char* kind_name(ValueKind kind);
ValueKind parse_kind(const std::string& name);

// A finite, non-empty set of item identifiers, kept sorted and duplicate-free.
using ItemSet = std::vector<std::string>;

// Ordered sequence of item sets.
using SetSequence = std::vector<ItemSet>;

// Real-valued series; lengths may differ between examples of one column.
using TimeSeries = std::vector<double>;

// Undirected simple graph. Edges are canonical: u < v, sorted, no duplicates.
struct GraphValue {
    std::uint32_t node_count = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

    bool operator==(const GraphValue&) const = default;
};

// Row handle into the distance matrix attached to a precomputed column.
struct PrecomputedRef {
    std::size_t row = 0;

    bool operator==(const PrecomputedRef&) const = default;
};

using FeatureValue = std::variant<double, SetSequence, TimeSeries, GraphValue, PrecomputedRef>;

ValueKind kind_of(const FeatureValue& value);

// Decidable structural comparison: set sequences element-wise by set equality,
// graphs by (node_count, edge set), series element-wise, scalars by value.
// Precomputed refs compare by row index here; the column-aware comparison that
// inspects matrix rows lives in dataset.hpp.
bool structurally_equal(const FeatureValue& a, const FeatureValue& b);

// Sorts and dedupes; throws DataError if the result is empty.
ItemSet make_item_set(std::vector<std::string> items);

// Canonicalizes edges to (min, max) sorted order; throws DataError on
// out-of-range endpoints, self-loops, or duplicate edges.
GraphValue make_graph(std::uint32_t node_count,
                      std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

}  // namespace rsf
