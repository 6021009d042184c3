#pragma once

// Reference implementations used only to check the library: exhaustive
// enumerations, full DP tables, an independent eigensolver and quadrature.
// Nothing here shares code with the implementation under test.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rsf/value.hpp"

namespace oracles {

struct BruteSplit {
    double threshold = 0.0;
    double impurity = 0.0;
    std::uint64_t balance = 0;
};

// Enumerates every unique projection value except the maximum, re-partitions
// the node from scratch for each, and applies the (impurity, balance,
// ascending threshold) preference order.
std::optional<BruteSplit> brute_force_best_threshold(std::span<const double> projection,
                                                     std::span<const std::uint8_t> labels);

// Direct pair counting: positive-over-negative wins, ties worth 1/2.
double brute_force_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Full-table dynamic programs.
double dtw_full_table(const std::vector<double>& a, const std::vector<double>& b);
double edit_full_table(const rsf::SetSequence& s, const rsf::SetSequence& t);

// Spectral graph distance recomputed end to end: cyclic Jacobi eigensolver,
// zero mode dropped, closed-form density normalization, composite Simpson on
// a 2^16-interval grid over [0, omega_max + 10 gamma].
double ipsen_reference(const rsf::GraphValue& g, const rsf::GraphValue& h, double gamma);

// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
// ascending.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> m);

// Upper-tail p-value of the chi-square independence statistic for a 2 x k
// table of counts (columns with zero total are dropped).
double chi_square_p(const std::vector<std::uint64_t>& row0, const std::vector<std::uint64_t>& row1);

}  // namespace oracles
