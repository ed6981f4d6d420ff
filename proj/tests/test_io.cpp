#include "doctest.h"

#include "geodeq/error.hpp"
#include "geodeq/io.hpp"

#include <cstdio>
#include <fstream>

using namespace geodeq;

TEST_CASE("metric files round trip") {
    for (const auto& name : corpus_names()) {
        CorpusEntry e = corpus_get(name);
        for (const MetricSpec* m : {&e.metric, e.base ? &*e.base : nullptr, e.partner ? &*e.partner : nullptr}) {
            if (!m) continue;
            const Json j = metric_to_json(*m);
            MetricSpec back = metric_from_json(j);
            CHECK(back.label() == m->label());
            CHECK(back.coords() == m->coords());
            CHECK(back.signature_hint == m->signature_hint);
            CHECK(dump(metric_to_json(back)) == dump(j));
            for (const auto& p : sample_points(*m, 3)) CHECK((metric_value(back, p) - metric_value(*m, p)).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("metric file validation") {
    auto base = [] {
        return Json::parse(R"({"label": "t", "dim": 2, "coords": ["u", "v"],
            "components": {"1,1": "1", "2,2": "u^2"}, "sample_box": [[1, 2], [0, 1]]})");
    };
    MetricSpec m = metric_from_json(base());
    CHECK(m.seed == kDefaultSeed);
    Point p{1.5, 0.2};
    CHECK(metric_value(m, p)(1, 1) == doctest::Approx(2.25));
    CHECK(metric_value(m, p)(0, 1) == 0.0);

    auto broken = [&](const char* key, Json value) {
        Json j = base();
        j[key] = std::move(value);
        return j;
    };
    CHECK_THROWS_AS(metric_from_json(broken("dim", 3)), InputError);
    CHECK_THROWS_AS(metric_from_json(broken("components", Json{{"2,1", "1"}})), InputError);
    CHECK_THROWS_AS(metric_from_json(broken("components", Json{{"1,3", "1"}})), InputError);
    CHECK_THROWS_AS(metric_from_json(broken("components", Json{{"a,b", "1"}})), InputError);
    CHECK_THROWS_AS(metric_from_json(broken("components", Json{{"1,1", "w"}})), InputError);
    CHECK_THROWS_AS(metric_from_json(broken("components", Json{{"1,1", "1 +"}})), InputError);
    CHECK_THROWS_AS(metric_from_json(broken("sample_box", Json::array({Json::array({0, 1})}))), InputError);
    CHECK_THROWS_AS(metric_from_json(broken("extra", 1)), InputError);
    CHECK_THROWS_AS(metric_from_json(broken("coords", "u")), InputError);
    CHECK_THROWS_AS(metric_from_json(Json::array()), InputError);
}

TEST_CASE("sources") {
    CHECK(load_metric("corpus:sphere2").dim() == 2);
    CHECK(load_metric("corpus:example2/base").dim() == 5);
    CHECK(load_metric("corpus:flat_projective_pair(3)/gbar").dim() == 3);
    CHECK_THROWS_AS(load_metric("corpus:sphere2/gbar"), InputError);
    CHECK_THROWS_AS(load_metric("corpus:nothing"), InputError);
    CHECK_THROWS_AS(load_metric("/nonexistent/metric.json"), InputError);

    const std::string path = "io_test_metric.json";
    {
        std::ofstream out(path);
        out << dump(metric_to_json(sphere_metric(3)));
    }
    CHECK(load_metric(path).dim() == 3);
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    CHECK_THROWS_AS(load_metric(path), InputError);
    std::remove(path.c_str());
}

TEST_CASE("matrices, fields and reports") {
    Eigen::MatrixXd m = matrix_from_json(Json::parse("[[1, 2], [3, 4]]"));
    CHECK(m(1, 0) == 3);
    CHECK_THROWS_AS(matrix_from_json(Json::parse("[[1, 2], [3]]")), InputError);
    CHECK_THROWS_AS(matrix_from_json(Json::parse("[]")), InputError);
    CHECK(matrix_from_json(to_json(m)) == m);

    CHECK(field_from_json(Json::parse(R"({"components": ["x1", "-x2"]})")).size() == 2);
    CHECK(field_from_json(Json::parse(R"(["x1"])")).size() == 1);
    CHECK_THROWS_AS(field_from_json(Json::parse(R"({"components": [1]})")), InputError);

    MobilityReport r = extended_mobility(flat_metric(3), 0);
    Json j = to_json(r);
    CHECK(j["D"] == 10);
    CHECK(j["seed"] == kDefaultSeed);
    CHECK(dump(j) == dump(to_json(extended_mobility(flat_metric(3), 0))));

    PairBlocks pb = canonical_pair_form(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2));
    CHECK(to_json(pb)["blocks"].size() == 2);

    Tensor t(2, 2);
    t(1, 0) = 5;
    CHECK(to_json(t)[1][0] == 5.0);
}
