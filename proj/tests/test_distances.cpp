#include <doctest.h>

#include <cmath>

#include "rsf/distances.hpp"
#include "rsf/error.hpp"
#include "rsf/rng.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace rsf;

TEST_CASE("scalar euclidean") {
    CHECK(euclidean_scalar(3.0, 3.0) == 0.0);
    CHECK(euclidean_scalar(0.0, 10.0) == 10.0);
    CHECK(euclidean_scalar(-2.0, 3.0) == 5.0);
    CHECK_THROWS_AS(euclidean_scalar(std::nan(""), 1.0), DataError);
}

TEST_CASE("vector euclidean") {
    const std::vector<double> a{0.0, 0.0}, b{3.0, 4.0};
    CHECK(euclidean_vector(a, b) == 5.0);
    CHECK(euclidean_vector(b, b) == 0.0);
    const std::vector<double> ones{1.0, 1.0, 1.0}, zeros{0.0, 0.0, 0.0};
    CHECK(euclidean_vector(ones, zeros) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(euclidean_vector(a, ones), DataError);
}

TEST_CASE("cosine distance") {
    const std::vector<double> e1{1.0, 0.0}, e2{0.0, 1.0}, diag{1.0, 1.0};
    CHECK(cosine_distance(e1, e1) == 0.0);
    CHECK(cosine_distance(e1, e2) == 1.0);
    CHECK(cosine_distance(diag, e1) == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-14));
    const std::vector<double> zero{0.0, 0.0};
    CHECK(cosine_distance(zero, e1) == 1.0);
    CHECK(cosine_distance(zero, zero) == 0.0);
    CHECK_THROWS_AS(cosine_distance(e1, std::vector<double>{1.0}), DataError);
}

TEST_CASE("dtw") {
    const std::vector<double> v{1.0, 2.0, 3.0};
    CHECK(dtw_distance(v, v) == 0.0);
    CHECK(dtw_distance(std::vector<double>{0.0}, std::vector<double>{5.0}) == 5.0);
    CHECK(dtw_distance(std::vector<double>{0.0, 1.0, 2.0}, std::vector<double>{0.0, 2.0}) == 1.0);
    CHECK_THROWS_AS(dtw_distance({}, v), DataError);

    SUBCASE("matches the full-table oracle") {
        Rng rng(7);
        for (int round = 0; round < 200; ++round) {
            const auto a = builders::random_series(rng, 9);
            const auto b = builders::random_series(rng, 9);
            CHECK(dtw_distance(a, b) == doctest::Approx(oracles::dtw_full_table(a, b)).epsilon(1e-13));
        }
    }

    SUBCASE("never exceeds the diagonal alignment cost") {
        Rng rng(8);
        for (int round = 0; round < 200; ++round) {
            const auto a = builders::random_series(rng, 8);
            auto b = builders::random_series(rng, 8);
            b.resize(a.size(), 0.0);
            double diagonal = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) diagonal += std::abs(a[i] - b[i]);
            CHECK(dtw_distance(a, b) <= diagonal + 1e-12);
        }
    }
}

TEST_CASE("set jaccard") {
    CHECK(set_jaccard({"a"}, {"a"}) == 0.0);
    CHECK(set_jaccard({"a"}, {"b"}) == 1.0);
    CHECK(set_jaccard({"a", "b"}, {"a"}) == 0.5);
    CHECK(set_jaccard({}, {}) == 0.0);
}

TEST_CASE("set-sequence edit distance") {
    const SetSequence s{{"a", "b"}, {"c"}};
    CHECK(seqset_edit_distance(s, s) == 0.0);
    CHECK(seqset_edit_distance(SetSequence{{"a"}}, SetSequence{}) == 1.0);
    CHECK(seqset_edit_distance(s, SetSequence{{"a"}}) == 1.5);

    SUBCASE("matches the full-table oracle") {
        Rng rng(9);
        for (int round = 0; round < 150; ++round) {
            const auto a = builders::random_set_sequence(rng, 6);
            const auto b = builders::random_set_sequence(rng, 6);
            CHECK(seqset_edit_distance(a, b) ==
                  doctest::Approx(oracles::edit_full_table(a, b)).epsilon(1e-13));
        }
    }

    SUBCASE("length bounds") {
        Rng rng(10);
        for (int round = 0; round < 200; ++round) {
            const auto a = builders::random_set_sequence(rng, 7);
            const auto b = builders::random_set_sequence(rng, 7);
            const double d = seqset_edit_distance(a, b);
            const double lo = a.size() > b.size() ? double(a.size() - b.size())
                                                  : double(b.size() - a.size());
            const double hi = double(std::max(a.size(), b.size()));
            CHECK(d >= lo - 1e-12);
            CHECK(d <= hi + 1e-12);
        }
    }
}

TEST_CASE("graph jaccard") {
    const auto g = make_graph(3, {{0, 1}, {1, 2}});
    CHECK(graph_jaccard(g, g) == 0.0);
    CHECK(graph_jaccard(make_graph(2, {{0, 1}}), make_graph(4, {{2, 3}})) == 1.0);
    CHECK(graph_jaccard(g, make_graph(3, {{0, 1}})) == 0.5);
}

TEST_CASE("degree divergence") {
    const auto path3 = builders::path_graph(3);
    const auto triangle = builders::complete_graph(3);
    CHECK(degree_divergence(path3, path3) == 0.0);
    CHECK(degree_divergence(make_graph(2, {{0, 1}}), triangle) == 1.0);

    // direct base-2 Jensen-Shannon arithmetic: P = {1: 2/3, 2: 1/3}, Q = {2: 1}
    const double p1 = 2.0 / 3.0, p2 = 1.0 / 3.0, q2 = 1.0;
    const double m1 = p1 / 2.0, m2 = (p2 + q2) / 2.0;
    const double expected =
        0.5 * (p1 * std::log2(p1 / m1) + p2 * std::log2(p2 / m2)) + 0.5 * (q2 * std::log2(q2 / m2));
    CHECK(degree_divergence(path3, triangle) == doctest::Approx(expected).epsilon(1e-13));

    SUBCASE("bounded in [0, 1]") {
        Rng rng(11);
        for (int round = 0; round < 300; ++round) {
            const auto g = builders::random_graph(rng, 8);
            const auto h = builders::random_graph(rng, 8);
            const double d = degree_divergence(g, h);
            CHECK(d >= 0.0);
            CHECK(d <= 1.0);
            CHECK(graph_jaccard(g, h) >= 0.0);
            CHECK(graph_jaccard(g, h) <= 1.0);
        }
    }
}

TEST_CASE("ipsen-mikhailov spectral distance") {
    const auto triangle = builders::complete_graph(3);
    CHECK(ipsen_mikhailov(triangle, triangle) == 0.0);
    CHECK_THROWS_AS(ipsen_mikhailov(builders::path_graph(1), triangle), DataError);

    SUBCASE("matches the independent quadrature oracle") {
        const auto k2 = builders::complete_graph(2);
        const auto empty2 = make_graph(2, {});
        const double d1 = ipsen_mikhailov(k2, empty2);
        CHECK(d1 == doctest::Approx(oracles::ipsen_reference(k2, empty2, 0.08)).epsilon(1e-8));

        const auto broken = builders::path_graph(3);  // triangle minus one edge
        const double d2 = ipsen_mikhailov(triangle, broken);
        CHECK(d2 == doctest::Approx(oracles::ipsen_reference(triangle, broken, 0.08)).epsilon(1e-8));

        Rng rng(12);
        for (int round = 0; round < 10; ++round) {
            const auto g = builders::random_graph(rng, 9);
            const auto h = builders::random_graph(rng, 9);
            const double mine = ipsen_mikhailov(g, h);
            const double ref = oracles::ipsen_reference(g, h, 0.08);
            CHECK(mine == doctest::Approx(ref).epsilon(1e-7));
        }
    }
}

TEST_CASE("measure registry") {
    CHECK(resolve_measure(ValueKind::TimeSeries, "dtw").id == MeasureId::Dtw);
    CHECK(resolve_measure(ValueKind::Numeric, "euclidean").id == MeasureId::EuclideanScalar);
    CHECK(resolve_measure(ValueKind::TimeSeries, "euclidean").id == MeasureId::EuclideanVector);
    CHECK_THROWS_AS(resolve_measure(ValueKind::Graph, "dtw"), DataError);
    try {
        resolve_measure(ValueKind::Graph, "dtw");
    } catch (const DataError& e) {
        const std::string what = e.what();
        CHECK(what.find("graphjaccard") != std::string::npos);
        CHECK(what.find("ipsenmikhailov") != std::string::npos);
    }
    CHECK(resolve_measure(ValueKind::Precomputed, "precomputed").id == MeasureId::Precomputed);
}

TEST_CASE("measure axioms on random values") {
    Rng rng(13);
    const auto check_axioms = [](const DistanceMeasure& m, const FeatureValue& a,
                                 const FeatureValue& b) {
        const double ab = m.eval(a, b);
        CHECK(ab >= 0.0);
        CHECK(m.eval(b, a) == ab);
        CHECK(m.eval(a, a) == 0.0);
    };
    for (int round = 0; round < 150; ++round) {
        check_axioms(resolve_measure(ValueKind::Numeric, "euclidean"),
                     FeatureValue{rng.uniform01() * 4.0}, FeatureValue{rng.uniform01() * 4.0});
        const auto len = 1 + rng.uniform_index(6);
        TimeSeries ta, tb;
        for (std::size_t i = 0; i < len; ++i) {
            ta.push_back(rng.uniform01());
            tb.push_back(rng.uniform01());
        }
        check_axioms(resolve_measure(ValueKind::TimeSeries, "euclidean"), FeatureValue{ta},
                     FeatureValue{tb});
        check_axioms(resolve_measure(ValueKind::TimeSeries, "cosine"), FeatureValue{ta},
                     FeatureValue{tb});
        check_axioms(resolve_measure(ValueKind::TimeSeries, "dtw"), FeatureValue{ta},
                     FeatureValue{tb});
        check_axioms(resolve_measure(ValueKind::SetSeq, "editjaccard"),
                     FeatureValue{builders::random_set_sequence(rng, 5)},
                     FeatureValue{builders::random_set_sequence(rng, 5)});
        const auto g = builders::random_graph(rng, 7);
        const auto h = builders::random_graph(rng, 7);
        check_axioms(resolve_measure(ValueKind::Graph, "graphjaccard"), FeatureValue{g},
                     FeatureValue{h});
        check_axioms(resolve_measure(ValueKind::Graph, "degreedivergence"), FeatureValue{g},
                     FeatureValue{h});
        if (round < 30) {
            check_axioms(resolve_measure(ValueKind::Graph, "ipsenmikhailov"), FeatureValue{g},
                         FeatureValue{h});
        }
    }
}

TEST_CASE("distance cache is transparent") {
    Rng rng(14);
    FeatureColumn col;
    col.name = "seq";
    col.kind = ValueKind::SetSeq;
    col.measure = "editjaccard";
    for (int i = 0; i < 12; ++i) {
        auto seq = builders::random_set_sequence(rng, 5);
        if (seq.empty()) seq.push_back(builders::random_item_set(rng, 12, 5));
        col.values.emplace_back(std::move(seq));
    }
    std::vector<std::string> labels;
    for (int i = 0; i < 12; ++i) labels.push_back(i % 2 ? "a" : "b");
    const auto ds = make_dataset({col}, labels);

    DistanceCache cache(ds);
    ColumnEvaluator direct(ds.columns[0]);
    for (std::size_t i = 0; i < 12; ++i) {
        for (std::size_t j = 0; j < 12; ++j) {
            CHECK(cache.distance(0, i, j) == direct.between_rows(i, j));
            // second lookup hits the memo and must agree bitwise
            CHECK(cache.distance(0, i, j) == cache.distance(0, j, i));
        }
    }
}

TEST_CASE("column evaluator probes match value evaluation") {
    Rng rng(15);
    FeatureColumn col;
    col.name = "seq";
    col.kind = ValueKind::SetSeq;
    col.measure = "editjaccard";
    for (int i = 0; i < 8; ++i) {
        auto seq = builders::random_set_sequence(rng, 5);
        if (seq.empty()) seq.push_back(builders::random_item_set(rng, 12, 5));
        col.values.emplace_back(std::move(seq));
    }
    const ColumnEvaluator ev(col);
    const auto& measure = resolve_measure(ValueKind::SetSeq, "editjaccard");
    // a probe containing items the column has never seen
    SetSequence probe_value{{"zz", "a"}, {"t1", "zz2"}};
    const auto probe = ev.make_probe(FeatureValue{probe_value});
    for (std::size_t row = 0; row < col.values.size(); ++row) {
        CHECK(ev.probe_to_row(probe, row) ==
              doctest::Approx(measure.eval(FeatureValue{probe_value}, col.values[row]))
                  .epsilon(1e-13));
    }
}
