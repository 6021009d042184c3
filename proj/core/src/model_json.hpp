#pragma once

// Internal JSON conversions shared by model/report serialization. Not part of
// the installed API; public headers stay free of the JSON dependency.

#include <nlohmann/json.hpp>

#include "rsf/forest.hpp"
#include "rsf/value.hpp"

namespace rsf {

nlohmann::json feature_value_to_json(const FeatureValue& value);
FeatureValue feature_value_from_json(const nlohmann::json& j);

nlohmann::json hyperparams_to_json(const Hyperparams& hp);
Hyperparams hyperparams_from_json(const nlohmann::json& j);

nlohmann::json tree_to_json(const TreeNode& node);
std::unique_ptr<TreeNode> tree_from_json(const nlohmann::json& j);

}  // namespace rsf
