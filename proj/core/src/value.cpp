#include "rsf/value.hpp"

#include <algorithm>

#include "rsf/error.hpp"

namespace rsf {

const char* kind_name(ValueKind kind) {
    switch (kind) {
        case ValueKind::Numeric: return "numeric";
        case ValueKind::SetSeq: return "setseq";
        case ValueKind::TimeSeries: return "timeseries";
        case ValueKind::Graph: return "graph";
        case ValueKind::Precomputed: return "precomputed";
    }
    return "unknown";
}

ValueKind parse_kind(const std::string& name) {
    if (name == "numeric") return ValueKind::Numeric;
    if (name == "setseq") return ValueKind::SetSeq;
    if (name == "timeseries") return ValueKind::TimeSeries;
    if (name == "graph") return ValueKind::Graph;
    if (name == "precomputed") return ValueKind::Precomputed;
    throw DataError("unknown value kind '" + name +
                    "' (expected numeric|setseq|timeseries|graph|precomputed)");
}

ValueKind kind_of(const FeatureValue& value) {
    switch (value.index()) {
        case 0: return ValueKind::Numeric;
        case 1: return ValueKind::SetSeq;
        case 2: return ValueKind::TimeSeries;
        case 3: return ValueKind::Graph;
        default: return ValueKind::Precomputed;
    }
}

bool structurally_equal(const FeatureValue& a, const FeatureValue& b) {
    if (a.index() != b.index()) return false;
    return a == b;
}

ItemSet make_item_set(std::vector<std::string> items) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    if (items.empty()) throw DataError("item set must be non-empty");
    return items;
}

GraphValue make_graph(std::uint32_t node_count,
                      std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
    for (auto& [u, v] : edges) {
        if (u >= node_count || v >= node_count) {
            throw DataError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                            ") references a node outside [0, " + std::to_string(node_count) + ")");
        }
        if (u == v) {
            throw DataError("self-loop on node " + std::to_string(u));
        }
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw DataError("duplicate edge in graph");
    }
    return GraphValue{node_count, std::move(edges)};
}

}  // namespace rsf
