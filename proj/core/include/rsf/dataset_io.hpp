#pragma once

#include <filesystem>

#include "rsf/dataset.hpp"

namespace rsf {

// Loads and validates a dataset from a JSON manifest:
//   {"labels": {"file": ...},
//    "columns": [{"name": ..., "kind": ..., "measure": ..., "file": ...}, ...]}
// Column files live relative to the manifest. Numeric columns and labels are
// single-column CSV; set sequences and graphs are JSON Lines; time series are
// one CSV row per example; precomputed columns are an n-by-n CSV matrix.
Dataset load_manifest(const std::filesystem::path& path);

// Writes the dataset in the manifest layout; returns the manifest path.
// Output bytes are a pure function of the dataset.
std::filesystem::path save_dataset(const Dataset& ds, const std::filesystem::path& directory);

}  // namespace rsf
