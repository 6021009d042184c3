#include <doctest.h>

#include <cmath>
#include <map>

#include "rsf/error.hpp"
#include "rsf/synth.hpp"
#include "support/oracles.hpp"

using namespace rsf;

namespace {

// pooled item counts per class over one setseq column
std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> item_counts(const Dataset& ds) {
    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> table;
    for (std::size_t i = 0; i < ds.n_examples(); ++i) {
        const bool positive = ds.label_ids[i] == 1;
        for (const auto& set : std::get<SetSequence>(ds.columns[0].values[i])) {
            for (const auto& item : set) {
                auto& cell = table[item];
                (positive ? cell.second : cell.first)++;
            }
        }
    }
    std::vector<std::uint64_t> row0, row1;
    for (const auto& [_, cell] : table) {
        row0.push_back(cell.first);
        row1.push_back(cell.second);
    }
    return {row0, row1};
}

double mean_length(const Dataset& ds, std::uint8_t label) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < ds.n_examples(); ++i) {
        if (ds.label_ids[i] != label) continue;
        sum += static_cast<double>(std::get<SetSequence>(ds.columns[0].values[i]).size());
        ++count;
    }
    return sum / static_cast<double>(count);
}

}  // namespace

TEST_CASE("generation is deterministic in the seed") {
    SynthConfig cfg;
    cfg.n_examples = 60;
    cfg.mode = SynthMode::Order;
    cfg.seed = 77;
    const auto a = generate(cfg);
    const auto b = generate(cfg);
    REQUIRE(a.n_examples() == b.n_examples());
    for (std::size_t i = 0; i < a.n_examples(); ++i) {
        CHECK(structurally_equal(a.columns[0].values[i], b.columns[0].values[i]));
        CHECK(a.labels[i] == b.labels[i]);
    }
}

TEST_CASE("config validation") {
    SynthConfig cfg;
    cfg.n_examples = 61;
    CHECK_THROWS_AS(generate(cfg), DataError);
    cfg.n_examples = 60;
    cfg.mode = SynthMode::Items;
    cfg.vocab_size = 30;
    cfg.mean_set_size = 20;  // vocab must be at least twice the mean set size
    CHECK_THROWS_AS(generate(cfg), DataError);
    CHECK_THROWS_AS(parse_synth_mode("nope"), DataError);
}

TEST_CASE("every sequence is non-empty with non-empty sets") {
    for (SynthMode mode : {SynthMode::Items, SynthMode::Lengths, SynthMode::Order}) {
        SynthConfig cfg;
        cfg.n_examples = 80;
        cfg.mode = mode;
        cfg.seed = 3;
        const auto ds = generate(cfg);
        CHECK(ds.columns[0].measure == "editjaccard");
        for (const auto& v : ds.columns[0].values) {
            const auto& seq = std::get<SetSequence>(v);
            CHECK(seq.size() >= 1);
            for (const auto& set : seq) CHECK(set.size() >= 1);
        }
    }
}

TEST_CASE("order mode sorts one class and shuffles the other") {
    SynthConfig cfg;
    cfg.n_examples = 100;
    cfg.mode = SynthMode::Order;
    cfg.seed = 11;
    const auto ds = generate(cfg);
    std::size_t unsorted_class0 = 0;
    for (std::size_t i = 0; i < ds.n_examples(); ++i) {
        const auto& seq = std::get<SetSequence>(ds.columns[0].values[i]);
        const bool sorted = std::is_sorted(seq.begin(), seq.end(),
                                           [](const ItemSet& a, const ItemSet& b) {
                                               return a.front() < b.front();
                                           });
        if (ds.label_ids[i] == 1) {
            CHECK(sorted);
        } else if (!sorted) {
            ++unsorted_class0;
        }
    }
    // the shuffled class should not accidentally be sorted
    CHECK(unsorted_class0 > 40);

    SUBCASE("bag-of-items marginals are indistinguishable between classes") {
        const auto [row0, row1] = item_counts(ds);
        CHECK(oracles::chi_square_p(row0, row1) > 0.01);
    }
}

TEST_CASE("lengths mode changes lengths but not item marginals") {
    SynthConfig cfg;
    cfg.n_examples = 400;
    cfg.mode = SynthMode::Lengths;
    cfg.seed = 13;
    const auto ds = generate(cfg);
    const double len0 = mean_length(ds, 0);
    const double len1 = mean_length(ds, 1);
    CHECK(len1 / len0 == doctest::Approx(1.4).epsilon(0.08));

    const auto [row0, row1] = item_counts(ds);
    CHECK(oracles::chi_square_p(row0, row1) > 0.01);
}

TEST_CASE("items mode changes item marginals but not lengths") {
    SynthConfig cfg;
    cfg.n_examples = 400;
    cfg.mode = SynthMode::Items;
    cfg.seed = 17;
    const auto ds = generate(cfg);
    const auto [row0, row1] = item_counts(ds);
    CHECK(oracles::chi_square_p(row0, row1) < 1e-6);
    CHECK(mean_length(ds, 0) == doctest::Approx(mean_length(ds, 1)).epsilon(0.08));
}

TEST_CASE("bag of items") {
    SUBCASE("counts items across the sequence") {
        FeatureColumn col;
        col.name = "s";
        col.kind = ValueKind::SetSeq;
        col.measure = "editjaccard";
        col.values = {FeatureValue{SetSequence{{"a"}, {"a", "b"}}},
                      FeatureValue{SetSequence{{"c"}}}};
        const auto ds = make_dataset({col}, {"x", "y"});
        const auto bag = bag_of_items(ds, 0);
        REQUIRE(bag.n_features() == 3);  // vocabulary {a, b, c}
        CHECK(bag.columns[0].name == "s_cnt_a");
        CHECK(std::get<double>(bag.columns[0].values[0]) == 2.0);
        CHECK(std::get<double>(bag.columns[1].values[0]) == 1.0);
        CHECK(std::get<double>(bag.columns[2].values[0]) == 0.0);
        CHECK(std::get<double>(bag.columns[2].values[1]) == 1.0);
        for (const auto& c : bag.columns) {
            CHECK(c.kind == ValueKind::Numeric);
            CHECK(c.measure == "euclidean");
            CHECK(c.values.size() == 2);  // full-width rows for every example
        }
    }

    SUBCASE("order-permuted copies map to identical rows") {
        FeatureColumn col;
        col.name = "s";
        col.kind = ValueKind::SetSeq;
        col.measure = "editjaccard";
        col.values = {FeatureValue{SetSequence{{"a"}, {"b", "c"}, {"a", "c"}}},
                      FeatureValue{SetSequence{{"a", "c"}, {"a"}, {"b", "c"}}}};
        const auto ds = make_dataset({col}, {"x", "y"});
        const auto bag = bag_of_items(ds, 0);
        for (const auto& c : bag.columns) {
            CHECK(std::get<double>(c.values[0]) == std::get<double>(c.values[1]));
        }
    }

    SUBCASE("rejects non-setseq columns") {
        FeatureColumn col;
        col.name = "x";
        col.kind = ValueKind::Numeric;
        col.measure = "euclidean";
        col.values = {FeatureValue{1.0}, FeatureValue{2.0}};
        const auto ds = make_dataset({col}, {"x", "y"});
        CHECK_THROWS_AS(bag_of_items(ds, 0), DataError);
        CHECK_THROWS_AS(bag_of_items(ds, 5), DataError);
    }
}
