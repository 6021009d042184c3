#include "rsf/model_io.hpp"

#include <fstream>

#include "model_json.hpp"
#include "rsf/error.hpp"

namespace rsf {

using nlohmann::json;

json feature_value_to_json(const FeatureValue& value) {
    json j;
    switch (kind_of(value)) {
        case ValueKind::Numeric:
            j["kind"] = "numeric";
            j["value"] = std::get<double>(value);
            break;
        case ValueKind::SetSeq: {
            j["kind"] = "setseq";
            json sets = json::array();
            for (const auto& set : std::get<SetSequence>(value)) sets.push_back(set);
            j["sets"] = std::move(sets);
            break;
        }
        case ValueKind::TimeSeries:
            j["kind"] = "timeseries";
            j["values"] = std::get<TimeSeries>(value);
            break;
        case ValueKind::Graph: {
            const auto& g = std::get<GraphValue>(value);
            j["kind"] = "graph";
            j["n"] = g.node_count;
            json edges = json::array();
            for (const auto& [u, v] : g.edges) edges.push_back({u, v});
            j["edges"] = std::move(edges);
            break;
        }
        case ValueKind::Precomputed:
            j["kind"] = "precomputed";
            j["row"] = std::get<PrecomputedRef>(value).row;
            break;
    }
    return j;
}

FeatureValue feature_value_from_json(const json& j) {
    const auto kind = parse_kind(j.at("kind").get<std::string>());
    switch (kind) {
        case ValueKind::Numeric:
            return j.at("value").get<double>();
        case ValueKind::SetSeq: {
            SetSequence seq;
            for (const auto& set : j.at("sets")) {
                seq.push_back(make_item_set(set.get<std::vector<std::string>>()));
            }
            return seq;
        }
        case ValueKind::TimeSeries:
            return j.at("values").get<TimeSeries>();
        case ValueKind::Graph: {
            std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
            for (const auto& e : j.at("edges")) {
                edges.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>());
            }
            return make_graph(j.at("n").get<std::uint32_t>(), std::move(edges));
        }
        case ValueKind::Precomputed:
            return PrecomputedRef{j.at("row").get<std::size_t>()};
    }
    throw FormatError("unhandled value kind");
}

json hyperparams_to_json(const Hyperparams& hp) {
    json j;
    j["max_trees"] = hp.max_trees;
    if (hp.max_features.is_fraction) {
        j["max_features"] = {{"fraction", hp.max_features.fraction}};
    } else {
        j["max_features"] = {{"absolute", hp.max_features.count}};
    }
    j["max_pairs"] = hp.max_pairs;
    if (hp.stopping.max_depth) {
        j["max_depth"] = *hp.stopping.max_depth;
    } else {
        j["max_depth"] = nullptr;
    }
    j["min_samples_split"] = hp.stopping.min_samples_split;
    j["min_samples_leaf"] = hp.stopping.min_samples_leaf;
    j["seed"] = hp.seed;
    j["numeric_fast_path"] = hp.numeric_fast_path;
    return j;
}

Hyperparams hyperparams_from_json(const json& j) {
    Hyperparams hp;
    hp.max_trees = j.at("max_trees").get<std::uint32_t>();
    const auto& mf = j.at("max_features");
    if (mf.contains("fraction")) {
        hp.max_features = MaxFeatures::from_fraction(mf.at("fraction").get<double>());
    } else {
        hp.max_features = MaxFeatures::from_count(mf.at("absolute").get<std::uint32_t>());
    }
    hp.max_pairs = j.at("max_pairs").get<std::uint32_t>();
    if (!j.at("max_depth").is_null()) {
        hp.stopping.max_depth = j.at("max_depth").get<std::uint32_t>();
    }
    hp.stopping.min_samples_split = j.at("min_samples_split").get<std::uint32_t>();
    hp.stopping.min_samples_leaf = j.at("min_samples_leaf").get<std::uint32_t>();
    hp.seed = j.at("seed").get<std::uint64_t>();
    hp.numeric_fast_path = j.value("numeric_fast_path", true);
    return hp;
}

json tree_to_json(const TreeNode& node) {
    json j;
    j["depth"] = node.depth;
    if (node.is_leaf()) {
        j["counts"] = {node.class_counts[0], node.class_counts[1]};
        return j;
    }
    const auto& split = *node.split;
    j["split"] = {{"feature", split.feature_index},
                  {"p", feature_value_to_json(split.exemplar_p)},
                  {"q", feature_value_to_json(split.exemplar_q)},
                  {"p_row", split.p_index},
                  {"q_row", split.q_index},
                  {"threshold", split.threshold},
                  {"impurity", split.impurity},
                  {"balance", split.balance}};
    j["left"] = tree_to_json(*node.left);
    j["right"] = tree_to_json(*node.right);
    return j;
}

std::unique_ptr<TreeNode> tree_from_json(const json& j) {
    auto node = std::make_unique<TreeNode>();
    node->depth = j.at("depth").get<std::uint32_t>();
    if (j.contains("split")) {
        const auto& s = j.at("split");
        SplitCandidate split;
        split.feature_index = s.at("feature").get<std::size_t>();
        split.exemplar_p = feature_value_from_json(s.at("p"));
        split.exemplar_q = feature_value_from_json(s.at("q"));
        split.p_index = s.at("p_row").get<std::size_t>();
        split.q_index = s.at("q_row").get<std::size_t>();
        split.threshold = s.at("threshold").get<double>();
        split.impurity = s.at("impurity").get<double>();
        split.balance = s.at("balance").get<std::uint64_t>();
        node->split = std::move(split);
        node->left = tree_from_json(j.at("left"));
        node->right = tree_from_json(j.at("right"));
        node->class_counts[0] = node->left->class_counts[0] + node->right->class_counts[0];
        node->class_counts[1] = node->left->class_counts[1] + node->right->class_counts[1];
    } else {
        const auto& counts = j.at("counts");
        node->class_counts = {counts.at(0).get<std::uint64_t>(), counts.at(1).get<std::uint64_t>()};
    }
    return node;
}

namespace {
constexpr int kModelVersion = 1;
}

std::string model_to_json_string(const ForestModel& model) {
    json j;
    j["version"] = kModelVersion;
    j["hyperparams"] = hyperparams_to_json(model.hyperparams);
    j["classes"] = model.class_values;
    json columns = json::array();
    for (const auto& col : model.columns) {
        columns.push_back(
            {{"name", col.name}, {"kind", kind_name(col.kind)}, {"measure", col.measure}});
    }
    j["columns"] = std::move(columns);
    json trees = json::array();
    for (const auto& tree : model.trees) trees.push_back(tree_to_json(*tree));
    j["trees"] = std::move(trees);
    return j.dump(1, '\t') + "\n";
}

void save_model(const ForestModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    out << model_to_json_string(model);
    if (!out) throw FormatError("failed writing model to '" + path.string() + "'");
}

ForestModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open model file '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError("model file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    try {
        if (!j.contains("version") || !j.at("version").is_number_integer()) {
            throw FormatError("model file lacks a version tag");
        }
        if (j.at("version").get<int>() != kModelVersion) {
            throw FormatError("unsupported model version " + j.at("version").dump() +
                              " (expected " + std::to_string(kModelVersion) + ")");
        }
        ForestModel model;
        model.hyperparams = hyperparams_from_json(j.at("hyperparams"));
        model.class_values = j.at("classes").get<std::vector<std::string>>();
        for (const auto& col : j.at("columns")) {
            model.columns.push_back({col.at("name").get<std::string>(),
                                     parse_kind(col.at("kind").get<std::string>()),
                                     col.at("measure").get<std::string>()});
        }
        for (const auto& tree : j.at("trees")) model.trees.push_back(tree_from_json(tree));
        return model;
    } catch (const json::exception& e) {
        throw FormatError("model file '" + path.string() + "' is malformed: " + e.what());
    }
}

}  // namespace rsf
