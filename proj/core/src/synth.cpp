#include "rsf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rsf/error.hpp"
#include "rsf/rng.hpp"

namespace rsf {

const char* synth_mode_name(SynthMode mode) {
    switch (mode) {
        case SynthMode::Items: return "items";
        case SynthMode::Lengths: return "lengths";
        case SynthMode::Order: return "order";
    }
    return "unknown";
}

SynthMode parse_synth_mode(const std::string& name) {
    if (name == "items") return SynthMode::Items;
    if (name == "lengths") return SynthMode::Lengths;
    if (name == "order") return SynthMode::Order;
    throw DataError("unknown mode '" + name + "' (expected items|lengths|order)");
}

namespace {

// Class-1 sequences in lengths mode are longer by this factor.
constexpr double kLengthOffset = 1.4;
// Item-weight tilt for the items mode: class 1 reverses the ranks of the
// same Zipf vector, so the classes differ only in their item distributions.
constexpr double kZipfExponent = 0.13;
// Order mode draws items from a geometric ramp shared by both classes. Low
// ids become rare, which spreads per-set minima over a wide range; sorting by
// minimum then rearranges sequences enough for the edit distance to see.
// Lengths mode uses a uniform distribution for both classes instead: near-
// constant substitution costs let sequence length dominate the alignment.
constexpr double kGeometricRatio = 1.25;

std::vector<std::string> item_names(std::size_t vocab) {
    std::size_t width = 1;
    for (std::size_t v = vocab - 1; v >= 10; v /= 10) ++width;
    std::vector<std::string> names(vocab);
    for (std::size_t i = 0; i < vocab; ++i) {
        std::string digits = std::to_string(i);
        names[i] = "i" + std::string(width - digits.size(), '0') + digits;
    }
    return names;
}

// Cumulative weights for categorical sampling by binary search.
std::vector<double> cumulative(const std::vector<double>& weights) {
    std::vector<double> cdf(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cdf[i] = acc;
    }
    return cdf;
}

std::vector<double> class_weights(SynthMode mode, int label, std::size_t vocab) {
    std::vector<double> w(vocab, 1.0);
    switch (mode) {
        case SynthMode::Items:
            for (std::size_t i = 0; i < vocab; ++i) {
                w[i] = 1.0 / std::pow(static_cast<double>(i + 1), kZipfExponent);
            }
            if (label == 1) std::reverse(w.begin(), w.end());
            break;
        case SynthMode::Order: {
            double acc = 1.0;
            for (std::size_t i = 0; i < vocab; ++i) {
                w[i] = acc;
                acc *= kGeometricRatio;
            }
            break;
        }
        case SynthMode::Lengths:
            break;  // uniform
    }
    return w;
}

// Distinct item ids drawn by weighted rejection; sorted ascending.
std::vector<std::uint32_t> sample_set(std::size_t size, const std::vector<double>& cdf, Rng& rng) {
    std::vector<bool> used(cdf.size(), false);
    std::vector<std::uint32_t> ids;
    ids.reserve(size);
    const double total = cdf.back();
    while (ids.size() < size) {
        const double u = rng.uniform01() * total;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto idx = static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(
            it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
        if (!used[idx]) {
            used[idx] = true;
            ids.push_back(idx);
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

Dataset generate(const SynthConfig& cfg) {
    if (cfg.n_examples < 2 || cfg.n_examples % 2 != 0) {
        throw DataError("n_examples must be even and >= 2");
    }
    if (cfg.vocab_size < 2) throw DataError("vocab_size must be >= 2");
    if (cfg.mean_length < 1.0 || cfg.mean_set_size < 1.0) {
        throw DataError("mean_length and mean_set_size must be >= 1");
    }
    if (cfg.mean_length > 1e4 || cfg.mean_set_size > 1e4) {
        throw DataError("mean_length and mean_set_size must be <= 10000");
    }
    if (cfg.mode == SynthMode::Items &&
        static_cast<double>(cfg.vocab_size) < 2.0 * cfg.mean_set_size) {
        throw DataError("items mode needs vocab_size >= 2 * mean_set_size");
    }

    const auto names = item_names(cfg.vocab_size);
    const std::vector<double> cdf[2] = {cumulative(class_weights(cfg.mode, 0, cfg.vocab_size)),
                                        cumulative(class_weights(cfg.mode, 1, cfg.vocab_size))};
    Rng rng(cfg.seed);

    std::vector<FeatureValue> values;
    std::vector<std::string> labels;
    values.reserve(cfg.n_examples);
    labels.reserve(cfg.n_examples);

    for (std::size_t i = 0; i < cfg.n_examples; ++i) {
        const int label = i < cfg.n_examples / 2 ? 0 : 1;
        double mean_length = cfg.mean_length;
        if (cfg.mode == SynthMode::Lengths && label == 1) mean_length *= kLengthOffset;

        const auto length = std::max<std::uint64_t>(1, rng.poisson(mean_length));
        std::vector<std::vector<std::uint32_t>> sets;
        sets.reserve(length);
        for (std::uint64_t s = 0; s < length; ++s) {
            auto size = std::max<std::uint64_t>(1, rng.poisson(cfg.mean_set_size));
            size = std::min<std::uint64_t>(size, cfg.vocab_size);
            sets.push_back(sample_set(size, cdf[label], rng));
        }

        if (cfg.mode == SynthMode::Order) {
            if (label == 1) {
                std::stable_sort(sets.begin(), sets.end(),
                                 [](const auto& a, const auto& b) { return a.front() < b.front(); });
            } else {
                rng.shuffle(std::span(sets));
            }
        }

        SetSequence seq;
        seq.reserve(sets.size());
        for (const auto& ids : sets) {
            ItemSet set;
            set.reserve(ids.size());
            for (auto id : ids) set.push_back(names[id]);
            seq.push_back(std::move(set));
        }
        values.push_back(std::move(seq));
        labels.push_back(label == 0 ? "class0" : "class1");
    }

    FeatureColumn column;
    column.name = "sequence";
    column.kind = ValueKind::SetSeq;
    column.values = std::move(values);
    column.measure = "editjaccard";
    return make_dataset({std::move(column)}, std::move(labels));
}

Dataset bag_of_items(const Dataset& ds, std::size_t column) {
    if (column >= ds.columns.size()) throw DataError("bag_of_items: column index out of range");
    const FeatureColumn& source = ds.columns[column];
    if (source.kind != ValueKind::SetSeq) {
        throw DataError("bag_of_items: column '" + source.name + "' is " +
                        kind_name(source.kind) + ", expected setseq");
    }

    std::vector<std::string> vocab;
    for (const auto& v : source.values) {
        for (const auto& set : std::get<SetSequence>(v)) {
            vocab.insert(vocab.end(), set.begin(), set.end());
        }
    }
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());

    // count of each item across the sequence's sets, one row per example
    std::vector<std::vector<double>> counts(ds.n_examples(),
                                            std::vector<double>(vocab.size(), 0.0));
    for (std::size_t i = 0; i < source.values.size(); ++i) {
        for (const auto& set : std::get<SetSequence>(source.values[i])) {
            for (const auto& item : set) {
                const auto it = std::lower_bound(vocab.begin(), vocab.end(), item);
                counts[i][static_cast<std::size_t>(it - vocab.begin())] += 1.0;
            }
        }
    }

    std::vector<FeatureColumn> columns;
    columns.reserve(ds.columns.size() - 1 + vocab.size());
    for (std::size_t c = 0; c < ds.columns.size(); ++c) {
        if (c != column) {
            columns.push_back(ds.columns[c]);
            continue;
        }
        for (std::size_t v = 0; v < vocab.size(); ++v) {
            FeatureColumn numeric;
            numeric.name = source.name + "_cnt_" + vocab[v];
            numeric.kind = ValueKind::Numeric;
            numeric.measure = "euclidean";
            numeric.values.reserve(ds.n_examples());
            for (std::size_t i = 0; i < ds.n_examples(); ++i) {
                numeric.values.emplace_back(counts[i][v]);
            }
            columns.push_back(std::move(numeric));
        }
    }
    return make_dataset(std::move(columns), ds.labels);
}

}  // namespace rsf
