#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rsf/distances.hpp"
#include "rsf/error.hpp"
#include "rsf/splitter.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace rsf;

TEST_CASE("gini impurity") {
    CHECK(gini_impurity(2, 2) == 0.5);
    CHECK(gini_impurity(4, 0) == 0.0);
    CHECK(gini_impurity(1, 3) == 0.375);
    CHECK_THROWS_AS(gini_impurity(0, 0), DataError);
}

TEST_CASE("weighted gini") {
    CHECK(weighted_gini(2, 0, 0, 3) == 0.0);
    CHECK(weighted_gini(1, 1, 1, 1) == 0.5);
    CHECK(weighted_gini(2, 0, 1, 2) == doctest::Approx(4.0 / 15.0).epsilon(1e-15));
    CHECK_THROWS_AS(weighted_gini(0, 0, 1, 1), DataError);
}

TEST_CASE("projection against an exemplar pair") {
    // scalar column [0, 10, 3]; pair (p=row0, q=row1)
    const auto ds = builders::numeric_dataset({{0.0, 10.0, 3.0}}, {"a", "b", "a"});
    const DistanceCache cache(ds);
    const std::size_t all[] = {0, 1, 2};
    for (bool fast : {false, true}) {
        const auto proj = project_onto_pair(cache, 0, 0, 1, all, fast);
        CHECK(proj[2] == 4.0);    // |10-3| - |0-3|
        CHECK(proj[0] == 10.0);   // x = x_p
        CHECK(proj[1] == -10.0);  // x = x_q
    }
}

TEST_CASE("numeric projection order is weakly reversed for x_p < x_q") {
    Rng rng(21);
    for (int round = 0; round < 100; ++round) {
        std::vector<double> values;
        for (int i = 0; i < 10; ++i) values.push_back(rng.uniform01() * 20.0 - 10.0);
        std::vector<std::string> labels;
        for (int i = 0; i < 10; ++i) labels.push_back(i % 2 ? "a" : "b");
        const auto ds = builders::numeric_dataset({values}, labels);
        const DistanceCache cache(ds);
        std::vector<std::size_t> rows(10);
        for (std::size_t i = 0; i < 10; ++i) rows[i] = i;
        const std::size_t p = rng.uniform_index(10);
        std::size_t q = rng.uniform_index(10);
        if (values[p] == values[q]) continue;
        const auto proj = project_onto_pair(cache, 0, p, q, rows, true);
        // ascending raw value must give non-increasing projection when
        // x_p < x_q, non-decreasing when x_p > x_q
        std::vector<std::size_t> order(10);
        for (std::size_t i = 0; i < 10; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const double sign = values[p] < values[q] ? 1.0 : -1.0;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            CHECK(sign * proj[order[i]] >= sign * proj[order[i + 1]] - 1e-12);
        }
    }
}

TEST_CASE("best threshold") {
    SUBCASE("perfect separation") {
        const double proj[] = {-2.0, -1.0, 3.0, 4.0};
        const std::uint8_t labels[] = {0, 0, 1, 1};
        const auto choice = best_threshold(proj, labels);
        REQUIRE(choice.has_value());
        CHECK(choice->threshold == -1.0);
        CHECK(choice->impurity == 0.0);
        CHECK(choice->balance == 0);
    }

    SUBCASE("one unique value yields nothing") {
        const double proj[] = {1.0, 1.0, 1.0};
        const std::uint8_t labels[] = {0, 1, 0};
        CHECK_FALSE(best_threshold(proj, labels).has_value());
    }

    SUBCASE("ties break to the smallest threshold") {
        const double proj[] = {0.0, 1.0, 2.0, 3.0};
        const std::uint8_t labels[] = {0, 1, 0, 1};
        const auto choice = best_threshold(proj, labels);
        REQUIRE(choice.has_value());
        CHECK(choice->threshold == 0.0);
        CHECK(choice->impurity == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(choice->balance == 2);
    }

    SUBCASE("length mismatch throws") {
        const double proj[] = {1.0, 2.0};
        const std::uint8_t labels[] = {0};
        CHECK_THROWS_AS(best_threshold(proj, labels), DataError);
    }

    SUBCASE("agrees exactly with the brute-force enumerator") {
        Rng rng(22);
        for (int round = 0; round < 400; ++round) {
            const std::size_t n = 2 + rng.uniform_index(11);
            std::vector<double> proj(n);
            std::vector<std::uint8_t> labels(n);
            for (std::size_t i = 0; i < n; ++i) {
                proj[i] = static_cast<double>(rng.uniform_index(5)) - 2.0;
                labels[i] = static_cast<std::uint8_t>(rng.uniform_index(2));
            }
            const auto mine = best_threshold(proj, labels);
            const auto ref = oracles::brute_force_best_threshold(proj, labels);
            REQUIRE(mine.has_value() == ref.has_value());
            if (mine) {
                CHECK(mine->threshold == ref->threshold);
                CHECK(mine->impurity == ref->impurity);
                CHECK(mine->balance == ref->balance);
            }
        }
    }
}

TEST_CASE("exemplar pair selection") {
    SUBCASE("picks the lower-dispersion class") {
        // class a holds {5, 5} (variance 0), class b holds {1, 9}
        const auto ds = builders::numeric_dataset({{5.0, 5.0, 1.0, 9.0}}, {"a", "a", "b", "b"});
        const DistanceCache cache(ds);
        const std::size_t all[] = {0, 1, 2, 3};
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            const auto pair = select_exemplar_pair(ds, cache, 0, all, rng);
            REQUIRE(pair.has_value());
            CHECK(std::get<double>(ds.columns[0].values[pair->first]) == 5.0);
            CHECK((pair->second == 2 || pair->second == 3));
        }
    }

    SUBCASE("returns nothing when every redraw hits an equal value") {
        // cosine distance is 0 between colinear series, so both classes have
        // zero dispersion; when x_p lands on (1,0) the only other-class
        // member equals it structurally and every redraw fails
        FeatureColumn col;
        col.name = "t";
        col.kind = ValueKind::TimeSeries;
        col.measure = "cosine";
        col.values = {FeatureValue{TimeSeries{1.0, 0.0}}, FeatureValue{TimeSeries{2.0, 0.0}},
                      FeatureValue{TimeSeries{1.0, 0.0}}};
        const auto ds = make_dataset({col}, {"a", "a", "b"});
        const DistanceCache cache(ds);
        const std::size_t all[] = {0, 1, 2};
        REQUIRE(has_variation(ds.columns[0], all));
        bool saw_none = false, saw_pair = false;
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            Rng rng(seed);
            const auto pair = select_exemplar_pair(ds, cache, 0, all, rng);
            (pair ? saw_pair : saw_none) = true;
        }
        CHECK(saw_none);
        CHECK(saw_pair);
    }
}

TEST_CASE("find_best_split") {
    SUBCASE("separable single feature reaches zero impurity") {
        const auto ds =
            builders::numeric_dataset({{1.0, 2.0, 3.0, 4.0}}, {"a", "a", "b", "b"});
        const DistanceCache cache(ds);
        const std::size_t all[] = {0, 1, 2, 3};
        SplitterParams params{1, 1, true};
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Rng rng(seed);
            const auto split = find_best_split(ds, cache, all, params, rng);
            REQUIRE(split.has_value());
            CHECK(split->impurity == 0.0);
            CHECK(split->balance == 0);
        }
    }

    SUBCASE("no feature variation yields nothing") {
        const auto ds = builders::numeric_dataset({{2.0, 2.0, 2.0}}, {"a", "b", "a"});
        const DistanceCache cache(ds);
        const std::size_t all[] = {0, 1, 2};
        SplitterParams params{1, 1, true};
        Rng rng(1);
        CHECK_FALSE(find_best_split(ds, cache, all, params, rng).has_value());
    }

    SUBCASE("a separating feature beats pure noise") {
        // feature 0 is noise (interleaved), feature 1 separates perfectly
        const auto ds = builders::numeric_dataset(
            {{1.0, 2.0, 1.0, 2.0, 1.0, 2.0}, {0.0, 1.0, 2.0, 10.0, 11.0, 12.0}},
            {"a", "a", "a", "b", "b", "b"});
        const DistanceCache cache(ds);
        const std::size_t all[] = {0, 1, 2, 3, 4, 5};
        SplitterParams params{2, 1, true};
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Rng rng(seed);
            const auto split = find_best_split(ds, cache, all, params, rng);
            REQUIRE(split.has_value());
            CHECK(split->feature_index == 1);
            CHECK(split->impurity == 0.0);
        }
    }

    SUBCASE("split candidates always produce two non-empty children") {
        Rng rng(23);
        for (int round = 0; round < 100; ++round) {
            const std::size_t n = 4 + rng.uniform_index(10);
            std::vector<double> values;
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < n; ++i) {
                values.push_back(static_cast<double>(rng.uniform_index(4)));
                labels.push_back(rng.uniform_index(2) ? "a" : "b");
            }
            const auto ds = builders::numeric_dataset({values}, labels);
            if (ds.class_values.size() != 2) continue;
            std::vector<std::size_t> rows(n);
            for (std::size_t i = 0; i < n; ++i) rows[i] = i;
            const DistanceCache cache(ds);
            SplitterParams params{1, 1, true};
            Rng inner(rng.next_u64());
            const auto split = find_best_split(ds, cache, rows, params, inner);
            if (!split) continue;
            const auto proj = project_onto_pair(cache, 0, split->p_index, split->q_index, rows, true);
            std::size_t left = 0;
            double max_proj = proj[0];
            for (std::size_t i = 0; i < n; ++i) {
                if (proj[i] <= split->threshold) ++left;
                max_proj = std::max(max_proj, proj[i]);
            }
            CHECK(left > 0);
            CHECK(left < n);
            CHECK(split->threshold < max_proj);
            CHECK(split->impurity >= 0.0);
            CHECK(split->impurity <= 0.5);
        }
    }

    SUBCASE("identical rng streams give identical results on both numeric routes") {
        Rng seeder(24);
        for (int round = 0; round < 50; ++round) {
            const std::size_t n = 6 + seeder.uniform_index(8);
            std::vector<std::vector<double>> cols(2);
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < n; ++i) {
                cols[0].push_back(static_cast<double>(seeder.uniform_index(6)));
                cols[1].push_back(seeder.uniform01() * 3.0);
                labels.push_back(i % 2 ? "a" : "b");
            }
            const auto ds = builders::numeric_dataset(cols, labels);
            const DistanceCache cache(ds);
            std::vector<std::size_t> rows(n);
            for (std::size_t i = 0; i < n; ++i) rows[i] = i;
            const std::uint64_t seed = seeder.next_u64();
            Rng fast_rng(seed), general_rng(seed);
            const auto fast =
                find_best_split(ds, cache, rows, SplitterParams{2, 1, true}, fast_rng);
            const auto general =
                find_best_split(ds, cache, rows, SplitterParams{2, 1, false}, general_rng);
            REQUIRE(fast.has_value() == general.has_value());
            if (fast) {
                CHECK(fast->feature_index == general->feature_index);
                CHECK(fast->p_index == general->p_index);
                CHECK(fast->q_index == general->q_index);
                CHECK(fast->threshold == general->threshold);
                CHECK(fast->impurity == general->impurity);
                CHECK(fast->balance == general->balance);
            }
        }
    }

    SUBCASE("evaluated splits never exceed the parent impurity") {
        Rng rng(25);
        TrainTelemetry telemetry;
        for (int round = 0; round < 100; ++round) {
            const std::size_t n = 4 + rng.uniform_index(12);
            std::vector<double> values;
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < n; ++i) {
                values.push_back(rng.uniform01());
                labels.push_back(rng.uniform_index(2) ? "a" : "b");
            }
            const auto ds = builders::numeric_dataset({values}, labels);
            if (ds.class_values.size() != 2) continue;
            std::vector<std::size_t> rows(n);
            for (std::size_t i = 0; i < n; ++i) rows[i] = i;
            const DistanceCache cache(ds);
            Rng inner(rng.next_u64());
            find_best_split(ds, cache, rows, SplitterParams{1, 2, true}, inner, &telemetry);
        }
        CHECK(telemetry.thresholds_evaluated.load() > 0);
        CHECK(telemetry.concavity_violations.load() == 0);
    }
}
