#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rsf/dataset.hpp"
#include "rsf/value.hpp"

namespace rsf {

// ---- primitive measures ----

// |a - b|; throws DataError on non-finite input.
double euclidean_scalar(double a, double b);

// L2 norm of a - b; lengths must match.
double euclidean_vector(std::span<const double> a, std::span<const double> b);

// 1 - (a.b)/(|a||b|). One all-zero vector gives 1, two give 0; equal inputs
// give exactly 0.
double cosine_distance(std::span<const double> a, std::span<const double> b);

// Unconstrained dynamic time warping with |a_i - b_j| local cost and the
// three-neighbor recurrence; no window, no normalization.
double dtw_distance(std::span<const double> a, std::span<const double> b);

// 1 - |A n B| / |A u B|; 0 when both sets are empty. Inputs must be sorted.
double set_jaccard(const ItemSet& a, const ItemSet& b);

// Levenshtein-style alignment: insertion and deletion cost 1, substituting
// set A by set B costs set_jaccard(A, B).
double seqset_edit_distance(const SetSequence& s, const SetSequence& t);

// Jaccard distance between the two edge sets.
double graph_jaccard(const GraphValue& g, const GraphValue& h);

// Base-2 Jensen-Shannon divergence between the empirical degree
// distributions; always in [0, 1].
double degree_divergence(const GraphValue& g, const GraphValue& h);

// Width of the Lorentzian kernel and accuracy of the adaptive quadrature used
// by the spectral graph distance.
struct IpsenOptions {
    double gamma = 0.08;
    double quadrature_tol = 1e-12;
};

// Spectral distance: L2 difference of Lorentzian-smoothed Laplacian spectral
// densities, integrated over [0, omega_max + 10*gamma]. Densities are
// normalized to unit mass on [0, inf) in closed form; the zero mode (smallest
// eigenvalue) is excluded. Both graphs need at least 2 nodes.
double ipsen_mikhailov(const GraphValue& g, const GraphValue& h, const IpsenOptions& opts = {});

// ---- registry ----

enum class MeasureId {
    EuclideanScalar,
    EuclideanVector,
    Cosine,
    Dtw,
    EditJaccard,
    GraphJaccard,
    DegreeDivergence,
    IpsenMikhailov,
    Precomputed,
};

struct DistanceMeasure {
    std::string name;
    ValueKind kind = ValueKind::Numeric;
    MeasureId id = MeasureId::EuclideanScalar;

    // Pure value-level evaluation. Precomputed refs cannot be compared without
    // their matrix; use ColumnEvaluator for those.
    double eval(const FeatureValue& a, const FeatureValue& b) const;
};

// Throws DataError listing the valid names for `kind` when the pair is unknown.
const DistanceMeasure& resolve_measure(ValueKind kind, const std::string& name);
std::vector<std::string> measure_names(ValueKind kind);

// ---- column-bound evaluation ----

// Binds a column to its resolved measure. Set-sequence items are interned to
// integer ids and spectral modes are precomputed per row, so repeated
// evaluations avoid re-deriving per-example state. Instances are immutable
// and safe for concurrent use.
class ColumnEvaluator {
public:
    explicit ColumnEvaluator(const FeatureColumn& column);

    const DistanceMeasure& measure() const { return *measure_; }
    const FeatureColumn& column() const { return *column_; }

    // Distance between two examples of the column.
    double between_rows(std::size_t i, std::size_t j) const;

    // Preprocessed external value (typically a stored split exemplar).
    struct Probe {
        FeatureValue value;
        std::vector<std::vector<std::uint32_t>> packed_seq;
        std::vector<double> spectral_modes;
        double spectral_norm = 0.0;
    };
    Probe make_probe(const FeatureValue& value) const;

    // Distance between a probe and a row of the column. For precomputed
    // columns the probe's ref must be covered by this column's matrix.
    double probe_to_row(const Probe& probe, std::size_t row) const;

private:
    const FeatureColumn* column_;
    const DistanceMeasure* measure_;

    // setseq: items interned per column; each set is a sorted id vector
    std::unordered_map<std::string, std::uint32_t> vocab_;
    std::vector<std::vector<std::vector<std::uint32_t>>> packed_;

    // ipsen-mikhailov: per-row vibrational modes and density normalization
    std::vector<std::vector<double>> modes_;
    std::vector<double> norms_;
};

// Lazily filled pairwise-distance store shared by every tree and fold working
// on one dataset. Cells hold NaN until computed; values are pure functions of
// the dataset, so racing writers store identical bytes and reads never tear.
class DistanceCache {
public:
    explicit DistanceCache(const Dataset& ds);

    DistanceCache(const DistanceCache&) = delete;
    DistanceCache& operator=(const DistanceCache&) = delete;

    double distance(std::size_t column, std::size_t i, std::size_t j) const;
    const ColumnEvaluator& evaluator(std::size_t column) const { return evaluators_[column]; }
    const Dataset& dataset() const { return *ds_; }

private:
    const Dataset* ds_;
    std::vector<ColumnEvaluator> evaluators_;
    // triangular arrays indexed j*(j+1)/2 + i for i <= j; empty when the
    // column is uncached (numeric, precomputed, or beyond the memory cap)
    mutable std::vector<std::vector<std::atomic<double>>> cells_;
};

}  // namespace rsf
