#pragma once

#include <string>

#include "rsf/eval.hpp"

namespace rsf::cli {

// Entry point behind the `rsf` binary. Exit codes: 0 success, 1 usage error,
// 2 data/model error.
int run(int argc, const char* const* argv);

// Fixed-width summary table for a cross-validation report.
std::string render_report(const EvalReport& report);

}  // namespace rsf::cli
