#include "doctest.h"

#include "geodeq/corpus.hpp"
#include "geodeq/error.hpp"
#include "geodeq/prolong.hpp"

#include <cmath>

using namespace geodeq;

namespace {

MetricSpec circle() {
    MetricSpec m("S1", {"th"}, {{-1, 1}});
    m.set_component(0, 0, "1");
    return m;
}

MetricSpec polar_plane(const std::string& r, const std::string& th) {
    MetricSpec m("polar", {r, th}, {{0.5, 3}, {-1, 1}});
    m.set_component(0, 0, "1");
    m.set_component(1, 1, r + "^2");
    return m;
}

}  // namespace

TEST_CASE("cone over the circle is the flat plane") {
    ConeBuild c = build_cone(circle());
    CHECK(c.total.dim() == 2);
    CHECK(c.total.coords()[0] == "r");
    CHECK(max_curvature(c.total, sample_points(c.total, 20)) < 1e-12);
    // a 2-dim cone is flat
    CHECK(check_hom(c.total, c.potential()).verdict == HomVerdict::Cone);
}

TEST_CASE("cone over flat lorentzian plane") {
    ConeBuild c = build_cone(flat_metric(2, 1));
    Point p{2.0, 0.3, -0.4};
    Eigen::MatrixXd g = metric_value(c.total, p);
    Eigen::MatrixXd want = Eigen::MatrixXd::Zero(3, 3);
    want(0, 0) = 1;
    want(1, 1) = -4;
    want(2, 2) = 4;
    CHECK((g - want).cwiseAbs().maxCoeff() == 0.0);
    CHECK(c.total.signature_hint == Signature{1, 2});
    CHECK(signature_of(g) == Signature{1, 2});
}

TEST_CASE("cone construction errors") {
    CHECK_THROWS_AS(build_cone(MetricSpec("empty", {}, {})), InputError);
    MetricSpec m("clash", {"r"}, {{0, 1}});
    m.set_component(0, 0, "1");
    CHECK_THROWS_AS(build_cone(m), InputError);
    CHECK_NOTHROW(build_cone(m, "rho"));
    CHECK_THROWS_AS(build_cone(circle(), "r", {-1, 2}), InputError);
}

TEST_CASE("closed-form cone Christoffel symbols") {
    for (const MetricSpec& base : {sphere_metric(2), flat_metric(3, 1), *example2().base}) {
        ConeBuild c = build_cone(base);
        for (const auto& p : sample_points(c.total, 20)) {
            Tensor a = cone_christoffel_closed(c, p);
            Tensor b = christoffel(c.total, p);
            double d = 0;
            for (std::size_t i = 0; i < a.data().size(); ++i) d = std::max(d, std::fabs(a.data()[i] - b.data()[i]));
            CHECK(d < 1e-9);
        }
    }
    ConeBuild s = build_cone(sphere_metric(2));
    Point p{1.0, 0.2, 0.3};
    Tensor t = cone_christoffel_closed(s, p);
    for (int i = 1; i < 3; ++i)
        for (int k = 1; k < 3; ++k) CHECK(t(i, 0, k) == doctest::Approx(i == k ? 1.0 : 0.0));

    MetricSpec line("R1", {"x"}, {{-1, 1}});
    line.set_component(0, 0, "1");
    Point q{1.7, 0.2};
    CHECK(cone_christoffel_closed(build_cone(line), q)(0, 1, 1) == doctest::Approx(-1.7));
    Point apex{0.0, 0.2};
    CHECK_THROWS_AS(cone_christoffel_closed(build_cone(line), apex), DomainError);
}

TEST_CASE("potential equations") {
    ConeBuild c = build_cone(sphere_metric(3));
    HomReport r = check_hom(c.total, c.potential());
    CHECK(r.hessian_residual < 1e-10);
    CHECK(r.gradient_residual < 1e-10);
    CHECK(r.verdict == HomVerdict::Cone);

    CHECK(check_hom(flat_metric(2), parse_expr("(x1^2 + x2^2)/2")).verdict == HomVerdict::Cone);

    MetricSpec s = sphere_metric(2);
    HomReport bad = check_hom(s, parse_expr("1"));
    CHECK(bad.verdict == HomVerdict::None);
    CHECK(bad.hessian_residual > 0.5);

    MetricSpec neg = flat_metric(2, 2);
    CHECK(check_hom(neg, parse_expr("-(x1^2 + x2^2)/2")).verdict == HomVerdict::ConeForNegative);
}

TEST_CASE("gluing cones") {
    ConeFactor a{polar_plane("r1", "t1"), parse_expr("r1^2/2")};
    ConeFactor b{polar_plane("r2", "t2"), parse_expr("r2^2/2")};
    ConeFactor ab = glue_product(a, b);
    CHECK(ab.metric.dim() == 4);
    CHECK(check_hom(ab.metric, ab.potential).verdict == HomVerdict::Cone);
    CHECK(max_curvature(ab.metric, sample_points(ab.metric, 10)) < 1e-12);

    ConeFactor unverified{polar_plane("r3", "t3"), parse_expr("r3")};
    CHECK_THROWS_AS(glue_product(a, unverified), InputError);
    CHECK_THROWS_AS(glue_product(a, a), InputError);

    for (const auto& name : {"realization(7,0,4+4)", "realization(6,1,3+3)"}) {
        CorpusEntry e = corpus_get(name);
        HomReport r = check_hom(e.metric, *e.potential);
        CHECK(r.verdict == HomVerdict::Cone);
        CHECK(r.hessian_residual < 1e-9);
    }
}

TEST_CASE("pack and unpack of parallel forms") {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        const int n = 1 + rng.below(5);
        ExtendedSolution s;
        Eigen::MatrixXd m = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return rng.uniform(-1, 1); });
        s.a = m + m.transpose();
        s.lambda = Eigen::VectorXd::NullaryExpr(n, [&] { return rng.uniform(-1, 1); });
        s.mu = rng.uniform(-1, 1);
        const double r = rng.uniform(0.5, 3);
        ExtendedSolution back = unpack_parallel(pack_parallel(s, r), r);
        CHECK((back.a - s.a).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((back.lambda - s.lambda).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(std::fabs(back.mu - s.mu) < 1e-15);
        ExtendedSolution f = from_fiber(to_fiber(s), n);
        CHECK((f.a - s.a).cwiseAbs().maxCoeff() == 0.0);
    }
    // (g, 0, 1) packs to the cone metric
    ConeBuild c = build_cone(sphere_metric(2));
    Point p{1.3, 0.2, -0.5};
    Point x{0.2, -0.5};
    ExtendedSolution g{metric_value(sphere_metric(2), x), Eigen::VectorXd::Zero(2), 1.0};
    CHECK((pack_parallel(g, 1.3) - metric_value(c.total, p)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("cone gradient is not parallel where the cone is curved") {
    CorpusEntry e = corpus_get("realization(5,2,4)");
    for (const auto& p : sample_points(e.metric, 5)) {
        if (riemann(e.metric, p, 0).riemann.max_abs() < 1e-6) continue;
        HolonomyGenerators h = infinitesimal_holonomy(tangent_connection(e.metric), p);
        KernelResult par = invariant_vectors(h);
        CHECK(par.dim == 2);
        Jet w = e.potential->eval_jet(p, 1, e.metric.coords());
        Eigen::VectorXd dw(e.metric.dim());
        for (int i = 0; i < e.metric.dim(); ++i) dw[i] = w.coeff(1 + i);
        Eigen::VectorXd grad = metric_value(e.metric, p).inverse() * dw;
        CHECK(distance_from_span(par.basis, grad) > 1e-6);
    }
}
