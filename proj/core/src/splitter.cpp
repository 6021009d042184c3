#include "rsf/splitter.hpp"

#include <algorithm>
#include <cmath>

#include "rsf/error.hpp"

namespace rsf {

double gini_impurity(std::uint64_t c0, std::uint64_t c1) {
    const double n = static_cast<double>(c0 + c1);
    if (c0 + c1 == 0) throw DataError("gini: empty node");
    const double p0 = static_cast<double>(c0) / n;
    const double p1 = static_cast<double>(c1) / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

double weighted_gini(std::uint64_t l0, std::uint64_t l1, std::uint64_t r0, std::uint64_t r1) {
    if (l0 + l1 == 0 || r0 + r1 == 0) throw DataError("weighted_gini: empty side");
    const double nl = static_cast<double>(l0 + l1);
    const double nr = static_cast<double>(r0 + r1);
    return (nl * gini_impurity(l0, l1) + nr * gini_impurity(r0, r1)) / (nl + nr);
}

namespace {

// weighted_gini(l, r) <= gini(parent) decided in exact integer arithmetic:
// (c0^2 + c1^2) * nl * nr <= ((l0^2 + l1^2) * nr + (r0^2 + r1^2) * nl) * n
bool concave_exact(std::uint64_t l0, std::uint64_t l1, std::uint64_t r0, std::uint64_t r1) {
    using u128 = unsigned __int128;
    const u128 nl = l0 + l1, nr = r0 + r1;
    const u128 c0 = l0 + r0, c1 = l1 + r1;
    const u128 n = nl + nr;
    const u128 lhs = (c0 * c0 + c1 * c1) * nl * nr;
    const u128 rhs = ((u128(l0) * l0 + u128(l1) * l1) * nr + (u128(r0) * r0 + u128(r1) * r1) * nl) * n;
    return lhs <= rhs;
}

}  // namespace

std::optional<ThresholdChoice> best_threshold(std::span<const double> projection,
                                              std::span<const std::uint8_t> labels,
                                              TrainTelemetry* telemetry) {
    if (projection.size() != labels.size()) {
        throw DataError("best_threshold: projection and labels differ in length");
    }
    const std::size_t n = projection.size();
    if (n < 2) return std::nullopt;

    std::vector<std::pair<double, std::uint8_t>> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = {projection[i], labels[i]};
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::uint64_t total0 = 0, total1 = 0;
    for (const auto& [_, y] : order) (y == 0 ? total0 : total1)++;

    std::optional<ThresholdChoice> best;
    std::uint64_t left0 = 0, left1 = 0;
    std::size_t i = 0;
    while (i < n) {
        const double value = order[i].first;
        while (i < n && order[i].first == value) {
            (order[i].second == 0 ? left0 : left1)++;
            ++i;
        }
        if (i == n) break;  // the maximum value would leave the right side empty

        const std::uint64_t right0 = total0 - left0;
        const std::uint64_t right1 = total1 - left1;
        const double impurity = weighted_gini(left0, left1, right0, right1);
        const std::uint64_t nl = left0 + left1;
        const std::uint64_t nr = right0 + right1;
        const std::uint64_t balance = nl > nr ? nl - nr : nr - nl;
        if (telemetry) {
            telemetry->thresholds_evaluated.fetch_add(1, std::memory_order_relaxed);
            if (!concave_exact(left0, left1, right0, right1)) {
                telemetry->concavity_violations.fetch_add(1, std::memory_order_relaxed);
            }
        }
        if (!best || impurity < best->impurity ||
            (impurity == best->impurity && balance < best->balance)) {
            best = ThresholdChoice{value, impurity, balance};
        }
    }
    return best;
}

std::vector<double> project_onto_pair(const DistanceCache& cache, std::size_t column,
                                      std::size_t p, std::size_t q,
                                      std::span<const std::size_t> indices, bool fast_numeric) {
    std::vector<double> projection(indices.size());
    const FeatureColumn& col = cache.dataset().columns[column];
    if (fast_numeric && col.kind == ValueKind::Numeric &&
        cache.evaluator(column).measure().id == MeasureId::EuclideanScalar) {
        const double pv = std::get<double>(col.values[p]);
        const double qv = std::get<double>(col.values[q]);
        for (std::size_t k = 0; k < indices.size(); ++k) {
            const double x = std::get<double>(col.values[indices[k]]);
            projection[k] = std::abs(qv - x) - std::abs(pv - x);
        }
    } else {
        for (std::size_t k = 0; k < indices.size(); ++k) {
            projection[k] =
                cache.distance(column, q, indices[k]) - cache.distance(column, p, indices[k]);
        }
    }
    return projection;
}

namespace {

constexpr std::size_t kDispersionSubsample = 20;
constexpr int kExemplarRedraws = 10;

// Within-class spread on one feature. Numeric columns use the sample variance
// of raw values; other kinds use the mean squared pairwise distance over at
// most kDispersionSubsample members.
double class_dispersion(const Dataset& ds, const DistanceCache& cache, std::size_t column,
                        const std::vector<std::size_t>& members, Rng& rng) {
    if (members.size() < 2) return 0.0;
    const FeatureColumn& col = ds.columns[column];
    if (col.kind == ValueKind::Numeric) {
        double mean = 0.0;
        for (std::size_t idx : members) mean += std::get<double>(col.values[idx]);
        mean /= static_cast<double>(members.size());
        double ss = 0.0;
        for (std::size_t idx : members) {
            const double d = std::get<double>(col.values[idx]) - mean;
            ss += d * d;
        }
        return ss / static_cast<double>(members.size() - 1);
    }
    std::vector<std::size_t> chosen;
    if (members.size() > kDispersionSubsample) {
        for (std::size_t pos : rng.sample_without_replacement(kDispersionSubsample, members.size())) {
            chosen.push_back(members[pos]);
        }
    } else {
        chosen = members;
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < chosen.size(); ++a) {
        for (std::size_t b = a + 1; b < chosen.size(); ++b) {
            const double d = cache.distance(column, chosen[a], chosen[b]);
            sum += d * d;
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>> select_exemplar_pair(
    const Dataset& ds, const DistanceCache& cache, std::size_t column,
    std::span<const std::size_t> indices, Rng& rng) {
    std::vector<std::size_t> members[2];
    for (std::size_t idx : indices) members[ds.label_ids[idx]].push_back(idx);
    if (members[0].empty() || members[1].empty()) return std::nullopt;

    const double disp0 = class_dispersion(ds, cache, column, members[0], rng);
    const double disp1 = class_dispersion(ds, cache, column, members[1], rng);
    const int c1 = disp1 < disp0 ? 1 : 0;
    const auto& own = members[c1];
    const auto& other = members[1 - c1];

    const std::size_t p = own[rng.uniform_index(own.size())];
    for (int attempt = 0; attempt < kExemplarRedraws; ++attempt) {
        const std::size_t q = other[rng.uniform_index(other.size())];
        if (values_distinct(ds.columns[column], p, q, indices)) {
            return std::make_pair(p, q);
        }
    }
    return std::nullopt;
}

std::optional<SplitCandidate> find_best_split(const Dataset& ds, const DistanceCache& cache,
                                              std::span<const std::size_t> indices,
                                              const SplitterParams& params, Rng& rng,
                                              TrainTelemetry* telemetry) {
    if (telemetry) telemetry->nodes_searched.fetch_add(1, std::memory_order_relaxed);

    std::vector<std::size_t> eligible;
    for (std::size_t c = 0; c < ds.columns.size(); ++c) {
        if (has_variation(ds.columns[c], indices)) eligible.push_back(c);
    }
    if (eligible.empty()) return std::nullopt;

    std::vector<std::size_t> sampled;
    if (eligible.size() <= params.max_features) {
        sampled = eligible;
    } else {
        for (std::size_t pos : rng.sample_without_replacement(params.max_features, eligible.size())) {
            sampled.push_back(eligible[pos]);
        }
    }

    std::vector<std::uint8_t> node_labels(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) node_labels[k] = ds.label_ids[indices[k]];

    std::optional<SplitCandidate> best;
    for (std::size_t feature : sampled) {
        for (std::uint32_t pair_slot = 0; pair_slot < params.max_pairs; ++pair_slot) {
            const auto pair = select_exemplar_pair(ds, cache, feature, indices, rng);
            if (!pair) continue;
            const auto [p, q] = *pair;
            const auto projection =
                project_onto_pair(cache, feature, p, q, indices, params.numeric_fast_path);
            if (telemetry) telemetry->projections_built.fetch_add(1, std::memory_order_relaxed);
            const auto choice = best_threshold(projection, node_labels, telemetry);
            if (!choice) continue;
            if (telemetry) telemetry->candidates_found.fetch_add(1, std::memory_order_relaxed);
            if (!best || choice->impurity < best->impurity ||
                (choice->impurity == best->impurity && choice->balance < best->balance)) {
                best = SplitCandidate{feature,
                                      ds.columns[feature].values[p],
                                      ds.columns[feature].values[q],
                                      p,
                                      q,
                                      choice->threshold,
                                      choice->impurity,
                                      choice->balance};
            }
        }
    }
    return best;
}

}  // namespace rsf
