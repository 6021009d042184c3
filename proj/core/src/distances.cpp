#include "rsf/distances.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rsf/error.hpp"

namespace rsf {

double euclidean_scalar(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw DataError("euclidean: non-finite input");
    }
    return std::abs(a - b);
}

double euclidean_vector(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DataError("euclidean: length mismatch (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DataError("cosine: length mismatch (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
    }
    if (std::equal(a.begin(), a.end(), b.begin())) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 1.0;
    const double d = 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(d, 0.0, 2.0);
}

double dtw_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw DataError("dtw: empty series");
    const std::size_t m = b.size();
    std::vector<double> prev(m), cur(m);
    prev[0] = std::abs(a[0] - b[0]);
    for (std::size_t j = 1; j < m; ++j) prev[j] = prev[j - 1] + std::abs(a[0] - b[j]);
    for (std::size_t i = 1; i < a.size(); ++i) {
        cur[0] = prev[0] + std::abs(a[i] - b[0]);
        for (std::size_t j = 1; j < m; ++j) {
            const double best = std::min({prev[j], prev[j - 1], cur[j - 1]});
            cur[j] = std::abs(a[i] - b[j]) + best;
        }
        std::swap(prev, cur);
    }
    return prev[m - 1];
}

namespace {

// Shared alignment recurrence for sequence edit distances: unit gap costs,
// caller-supplied substitution cost.
template <typename SubCost>
double edit_alignment(std::size_t n, std::size_t m, SubCost&& sub) {
    std::vector<double> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<double>(j);
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<double>(i);
        for (std::size_t j = 1; j <= m; ++j) {
            cur[j] = std::min({prev[j] + 1.0, cur[j - 1] + 1.0, prev[j - 1] + sub(i - 1, j - 1)});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

template <typename T>
double sorted_jaccard(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t i = 0, j = 0, inter = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++inter;
            ++i;
            ++j;
        }
    }
    const double uni = static_cast<double>(a.size() + b.size() - inter);
    return 1.0 - static_cast<double>(inter) / uni;
}

}  // namespace

double set_jaccard(const ItemSet& a, const ItemSet& b) { return sorted_jaccard(a, b); }

double seqset_edit_distance(const SetSequence& s, const SetSequence& t) {
    return edit_alignment(s.size(), t.size(),
                          [&](std::size_t i, std::size_t j) { return set_jaccard(s[i], t[j]); });
}

double graph_jaccard(const GraphValue& g, const GraphValue& h) {
    return sorted_jaccard(g.edges, h.edges);
}

namespace {

// Degree histogram as (degree, count) pairs sorted by degree.
std::vector<std::pair<std::uint32_t, std::uint32_t>> degree_histogram(const GraphValue& g) {
    std::vector<std::uint32_t> degree(g.node_count, 0);
    for (const auto& [u, v] : g.edges) {
        ++degree[u];
        ++degree[v];
    }
    std::sort(degree.begin(), degree.end());
    std::vector<std::pair<std::uint32_t, std::uint32_t>> hist;
    for (std::size_t i = 0; i < degree.size();) {
        std::size_t j = i;
        while (j < degree.size() && degree[j] == degree[i]) ++j;
        hist.emplace_back(degree[i], static_cast<std::uint32_t>(j - i));
        i = j;
    }
    return hist;
}

}  // namespace

double degree_divergence(const GraphValue& g, const GraphValue& h) {
    const auto hg = degree_histogram(g);
    const auto hh = degree_histogram(h);
    const double ng = static_cast<double>(g.node_count);
    const double nh = static_cast<double>(h.node_count);

    double jsd = 0.0;
    std::size_t i = 0, j = 0;
    while (i < hg.size() || j < hh.size()) {
        double p = 0.0, q = 0.0;
        if (j >= hh.size() || (i < hg.size() && hg[i].first < hh[j].first)) {
            p = hg[i++].second / ng;
        } else if (i >= hg.size() || hh[j].first < hg[i].first) {
            q = hh[j++].second / nh;
        } else {
            p = hg[i++].second / ng;
            q = hh[j++].second / nh;
        }
        const double mid = 0.5 * (p + q);
        // one commutative sum per degree keeps the result bit-symmetric
        double term = 0.0;
        if (p > 0.0) term += 0.5 * p * std::log2(p / mid);
        if (q > 0.0) term += 0.5 * q * std::log2(q / mid);
        jsd += term;
    }
    return std::clamp(jsd, 0.0, 1.0);
}

// ---- spectral distance ----

namespace {

std::vector<double> laplacian_modes(const GraphValue& g) {
    const auto n = static_cast<Eigen::Index>(g.node_count);
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [u, v] : g.edges) {
        lap(u, u) += 1.0;
        lap(v, v) += 1.0;
        lap(u, v) -= 1.0;
        lap(v, u) -= 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
    // eigenvalues come back ascending; the first is the zero mode
    std::vector<double> modes;
    modes.reserve(g.node_count - 1);
    for (Eigen::Index k = 1; k < n; ++k) {
        modes.push_back(std::sqrt(std::abs(solver.eigenvalues()[k])));
    }
    return modes;
}

double lorentzian_norm(std::span<const double> modes, double gamma) {
    double sum = 0.0;
    for (double w : modes) sum += std::numbers::pi / 2.0 + std::atan(w / gamma);
    return sum;
}

double spectral_density(double w, std::span<const double> modes, double norm, double gamma) {
    double sum = 0.0;
    for (double wk : modes) {
        const double d = w - wk;
        sum += gamma / (d * d + gamma * gamma);
    }
    return sum / norm;
}

template <typename F>
double adaptive_simpson(F&& f, double a, double fa, double m, double fm, double b, double fb,
                        double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

// Seeds the adaptive rule with panels narrower than the Lorentzian peaks so
// none of them is skipped by an overly smooth first estimate.
template <typename F>
double integrate(F&& f, double a, double b, double tol) {
    constexpr int kPanels = 64;
    const double h = (b - a) / kPanels;
    double total = 0.0;
    for (int p = 0; p < kPanels; ++p) {
        const double lo = a + p * h;
        const double hi = lo + h;
        const double mid = 0.5 * (lo + hi);
        const double flo = f(lo);
        const double fmid = f(mid);
        const double fhi = f(hi);
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += adaptive_simpson(f, lo, flo, mid, fmid, hi, fhi, whole, tol / kPanels, 40);
    }
    return total;
}

double ipsen_from_modes(std::span<const double> modes_g, double norm_g,
                        std::span<const double> modes_h, double norm_h,
                        const IpsenOptions& opts) {
    double wmax = 0.0;
    for (double w : modes_g) wmax = std::max(wmax, w);
    for (double w : modes_h) wmax = std::max(wmax, w);
    const double hi = wmax + 10.0 * opts.gamma;
    const auto integrand = [&](double w) {
        const double d = spectral_density(w, modes_g, norm_g, opts.gamma) -
                         spectral_density(w, modes_h, norm_h, opts.gamma);
        return d * d;
    };
    const double integral = integrate(integrand, 0.0, hi, opts.quadrature_tol);
    return std::sqrt(std::max(0.0, integral));
}

}  // namespace

double ipsen_mikhailov(const GraphValue& g, const GraphValue& h, const IpsenOptions& opts) {
    if (g.node_count < 2 || h.node_count < 2) {
        throw DataError("ipsenmikhailov: graphs need at least 2 nodes");
    }
    const auto mg = laplacian_modes(g);
    const auto mh = laplacian_modes(h);
    return ipsen_from_modes(mg, lorentzian_norm(mg, opts.gamma), mh,
                            lorentzian_norm(mh, opts.gamma), opts);
}

// ---- registry ----

namespace {

const std::vector<DistanceMeasure>& registry() {
    static const std::vector<DistanceMeasure> measures = {
        {"euclidean", ValueKind::Numeric, MeasureId::EuclideanScalar},
        {"euclidean", ValueKind::TimeSeries, MeasureId::EuclideanVector},
        {"cosine", ValueKind::TimeSeries, MeasureId::Cosine},
        {"dtw", ValueKind::TimeSeries, MeasureId::Dtw},
        {"editjaccard", ValueKind::SetSeq, MeasureId::EditJaccard},
        {"graphjaccard", ValueKind::Graph, MeasureId::GraphJaccard},
        {"degreedivergence", ValueKind::Graph, MeasureId::DegreeDivergence},
        {"ipsenmikhailov", ValueKind::Graph, MeasureId::IpsenMikhailov},
        {"precomputed", ValueKind::Precomputed, MeasureId::Precomputed},
    };
    return measures;
}

}  // namespace

std::vector<std::string> measure_names(ValueKind kind) {
    std::vector<std::string> names;
    for (const auto& m : registry()) {
        if (m.kind == kind) names.push_back(m.name);
    }
    return names;
}

const DistanceMeasure& resolve_measure(ValueKind kind, const std::string& name) {
    for (const auto& m : registry()) {
        if (m.kind == kind && m.name == name) return m;
    }
    std::string valid;
    for (const auto& n : measure_names(kind)) {
        if (!valid.empty()) valid += ", ";
        valid += n;
    }
    throw DataError("no measure '" + name + "' for kind " + kind_name(kind) +
                    " (valid: " + (valid.empty() ? "<none>" : valid) + ")");
}

namespace {

const TimeSeries& as_series(const FeatureValue& v, const char* who) {
    if (kind_of(v) != ValueKind::TimeSeries) {
        throw DataError(std::string(who) + ": expected a timeseries value, got " +
                        kind_name(kind_of(v)));
    }
    return std::get<TimeSeries>(v);
}

const GraphValue& as_graph(const FeatureValue& v, const char* who) {
    if (kind_of(v) != ValueKind::Graph) {
        throw DataError(std::string(who) + ": expected a graph value, got " + kind_name(kind_of(v)));
    }
    return std::get<GraphValue>(v);
}

}  // namespace

double DistanceMeasure::eval(const FeatureValue& a, const FeatureValue& b) const {
    switch (id) {
        case MeasureId::EuclideanScalar: {
            if (kind_of(a) != ValueKind::Numeric || kind_of(b) != ValueKind::Numeric) {
                throw DataError("euclidean: expected numeric values");
            }
            return euclidean_scalar(std::get<double>(a), std::get<double>(b));
        }
        case MeasureId::EuclideanVector:
            return euclidean_vector(as_series(a, "euclidean"), as_series(b, "euclidean"));
        case MeasureId::Cosine:
            return cosine_distance(as_series(a, "cosine"), as_series(b, "cosine"));
        case MeasureId::Dtw:
            return dtw_distance(as_series(a, "dtw"), as_series(b, "dtw"));
        case MeasureId::EditJaccard: {
            if (kind_of(a) != ValueKind::SetSeq || kind_of(b) != ValueKind::SetSeq) {
                throw DataError("editjaccard: expected set-sequence values");
            }
            return seqset_edit_distance(std::get<SetSequence>(a), std::get<SetSequence>(b));
        }
        case MeasureId::GraphJaccard:
            return graph_jaccard(as_graph(a, "graphjaccard"), as_graph(b, "graphjaccard"));
        case MeasureId::DegreeDivergence:
            return degree_divergence(as_graph(a, "degreedivergence"), as_graph(b, "degreedivergence"));
        case MeasureId::IpsenMikhailov:
            return ipsen_mikhailov(as_graph(a, "ipsenmikhailov"), as_graph(b, "ipsenmikhailov"));
        case MeasureId::Precomputed:
            throw Error("precomputed measure requires the column's distance matrix");
    }
    throw Error("unhandled measure id");
}

// ---- column-bound evaluation ----

ColumnEvaluator::ColumnEvaluator(const FeatureColumn& column)
    : column_(&column), measure_(&resolve_measure(column.kind, column.measure)) {
    if (measure_->id == MeasureId::EditJaccard) {
        std::vector<std::string> items;
        for (const auto& v : column.values) {
            for (const auto& set : std::get<SetSequence>(v)) {
                items.insert(items.end(), set.begin(), set.end());
            }
        }
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        for (std::uint32_t id = 0; id < items.size(); ++id) vocab_.emplace(items[id], id);

        packed_.reserve(column.values.size());
        for (const auto& v : column.values) {
            const auto& seq = std::get<SetSequence>(v);
            std::vector<std::vector<std::uint32_t>> packed_seq;
            packed_seq.reserve(seq.size());
            for (const auto& set : seq) {
                std::vector<std::uint32_t> ids;
                ids.reserve(set.size());
                for (const auto& item : set) ids.push_back(vocab_.at(item));
                // item ids follow lexicographic order, so a sorted set stays sorted
                packed_seq.push_back(std::move(ids));
            }
            packed_.push_back(std::move(packed_seq));
        }
    } else if (measure_->id == MeasureId::IpsenMikhailov) {
        modes_.reserve(column.values.size());
        norms_.reserve(column.values.size());
        for (std::size_t i = 0; i < column.values.size(); ++i) {
            const auto& g = std::get<GraphValue>(column.values[i]);
            if (g.node_count < 2) {
                throw DataError("column '" + column.name + "' record " + std::to_string(i) +
                                ": ipsenmikhailov requires graphs with at least 2 nodes");
            }
            modes_.push_back(laplacian_modes(g));
            norms_.push_back(lorentzian_norm(modes_.back(), IpsenOptions{}.gamma));
        }
    }
}

namespace {

double packed_edit_distance(const std::vector<std::vector<std::uint32_t>>& s,
                            const std::vector<std::vector<std::uint32_t>>& t) {
    return edit_alignment(s.size(), t.size(),
                          [&](std::size_t i, std::size_t j) { return sorted_jaccard(s[i], t[j]); });
}

}  // namespace

double ColumnEvaluator::between_rows(std::size_t i, std::size_t j) const {
    const auto& values = column_->values;
    switch (measure_->id) {
        case MeasureId::EuclideanScalar:
            return euclidean_scalar(std::get<double>(values[i]), std::get<double>(values[j]));
        case MeasureId::EuclideanVector:
            return euclidean_vector(std::get<TimeSeries>(values[i]), std::get<TimeSeries>(values[j]));
        case MeasureId::Cosine:
            return cosine_distance(std::get<TimeSeries>(values[i]), std::get<TimeSeries>(values[j]));
        case MeasureId::Dtw:
            return dtw_distance(std::get<TimeSeries>(values[i]), std::get<TimeSeries>(values[j]));
        case MeasureId::EditJaccard:
            return packed_edit_distance(packed_[i], packed_[j]);
        case MeasureId::GraphJaccard:
            return graph_jaccard(std::get<GraphValue>(values[i]), std::get<GraphValue>(values[j]));
        case MeasureId::DegreeDivergence:
            return degree_divergence(std::get<GraphValue>(values[i]), std::get<GraphValue>(values[j]));
        case MeasureId::IpsenMikhailov:
            return ipsen_from_modes(modes_[i], norms_[i], modes_[j], norms_[j], IpsenOptions{});
        case MeasureId::Precomputed: {
            const auto ri = std::get<PrecomputedRef>(values[i]).row;
            const auto rj = std::get<PrecomputedRef>(values[j]).row;
            return (*column_->matrix)(ri, rj);
        }
    }
    throw Error("unhandled measure id");
}

ColumnEvaluator::Probe ColumnEvaluator::make_probe(const FeatureValue& value) const {
    if (kind_of(value) != column_->kind) {
        throw DataError("column '" + column_->name + "': probe kind " + kind_name(kind_of(value)) +
                        " does not match column kind " + kind_name(column_->kind));
    }
    Probe probe;
    probe.value = value;
    if (measure_->id == MeasureId::EditJaccard) {
        // items unseen in this column get fresh ids past the vocabulary; they
        // can never intersect a row's items but still count toward unions
        std::unordered_map<std::string, std::uint32_t> extra;
        for (const auto& set : std::get<SetSequence>(value)) {
            std::vector<std::uint32_t> ids;
            ids.reserve(set.size());
            for (const auto& item : set) {
                auto it = vocab_.find(item);
                if (it != vocab_.end()) {
                    ids.push_back(it->second);
                } else {
                    const auto fresh = static_cast<std::uint32_t>(vocab_.size() + extra.size());
                    ids.push_back(extra.emplace(item, fresh).first->second);
                }
            }
            std::sort(ids.begin(), ids.end());
            probe.packed_seq.push_back(std::move(ids));
        }
    } else if (measure_->id == MeasureId::IpsenMikhailov) {
        const auto& g = std::get<GraphValue>(value);
        if (g.node_count < 2) {
            throw DataError("ipsenmikhailov: graphs need at least 2 nodes");
        }
        probe.spectral_modes = laplacian_modes(g);
        probe.spectral_norm = lorentzian_norm(probe.spectral_modes, IpsenOptions{}.gamma);
    }
    return probe;
}

double ColumnEvaluator::probe_to_row(const Probe& probe, std::size_t row) const {
    const auto& values = column_->values;
    switch (measure_->id) {
        case MeasureId::EditJaccard:
            return packed_edit_distance(probe.packed_seq, packed_[row]);
        case MeasureId::IpsenMikhailov:
            return ipsen_from_modes(probe.spectral_modes, probe.spectral_norm, modes_[row],
                                    norms_[row], IpsenOptions{});
        case MeasureId::Precomputed: {
            const auto p = std::get<PrecomputedRef>(probe.value).row;
            const auto r = std::get<PrecomputedRef>(values[row]).row;
            if (p >= column_->matrix->size()) {
                throw DataError("column '" + column_->name + "': exemplar row " + std::to_string(p) +
                                " is not covered by the distance matrix; precomputed columns "
                                "cannot score unseen examples");
            }
            return (*column_->matrix)(p, r);
        }
        default:
            return measure_->eval(probe.value, values[row]);
    }
}

// ---- shared cache ----

namespace {

// Per-column cap on cached pairs (~256 MB of doubles); larger columns fall
// back to direct evaluation.
constexpr std::size_t kMaxCachedPairs = std::size_t{1} << 25;

bool cacheable_kind(ValueKind kind) {
    return kind == ValueKind::SetSeq || kind == ValueKind::TimeSeries || kind == ValueKind::Graph;
}

}  // namespace

DistanceCache::DistanceCache(const Dataset& ds) : ds_(&ds) {
    evaluators_.reserve(ds.columns.size());
    for (const auto& col : ds.columns) evaluators_.emplace_back(col);

    const std::size_t n = ds.n_examples();
    const std::size_t pairs = n * (n + 1) / 2;
    cells_.resize(ds.columns.size());
    for (std::size_t c = 0; c < ds.columns.size(); ++c) {
        if (!cacheable_kind(ds.columns[c].kind) || pairs > kMaxCachedPairs) continue;
        std::vector<std::atomic<double>> cells(pairs);
        for (auto& cell : cells) {
            cell.store(std::numeric_limits<double>::quiet_NaN(), std::memory_order_relaxed);
        }
        cells_[c] = std::move(cells);
    }
}

double DistanceCache::distance(std::size_t column, std::size_t i, std::size_t j) const {
    auto& cells = cells_[column];
    if (cells.empty()) return evaluators_[column].between_rows(i, j);
    if (i > j) std::swap(i, j);
    const std::size_t idx = j * (j + 1) / 2 + i;
    const double cached = cells[idx].load(std::memory_order_relaxed);
    if (!std::isnan(cached)) return cached;
    const double value = evaluators_[column].between_rows(i, j);
    cells[idx].store(value, std::memory_order_relaxed);
    return value;
}

}  // namespace rsf
