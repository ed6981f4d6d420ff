#include "doctest.h"

#include "geodeq/corpus.hpp"
#include "geodeq/error.hpp"
#include "geodeq/mobility.hpp"
#include "geodeq/pairs.hpp"

#include <cmath>

using namespace geodeq;

namespace {

std::vector<Expr> field(std::initializer_list<const char*> comps) {
    std::vector<Expr> v;
    for (const char* c : comps) v.push_back(parse_expr(c));
    return v;
}

MetricSpec perturbed(const MetricSpec& m, const char* extra) {
    MetricSpec out = m;
    out.set_component(0, 0, m.component(0, 0) + parse_expr(extra));
    return out;
}

}  // namespace

TEST_CASE("phi of simple pairs") {
    MetricSpec g = sphere_metric(3);
    Point p{0.1, -0.2, 0.3};
    CHECK(phi_of_pair(g, g, p) == 0.0);
    for (double c : {2.0, 1.0 / 3, -1.0})
        CHECK(phi_of_pair(g, scale_metric(g, c), p) == doctest::Approx(3.0 / 8 * std::log(std::fabs(c))));
    MetricSpec other = sphere_metric(2);
    CHECK_THROWS_AS(phi_of_pair(g, other, p), InputError);
}

TEST_CASE("dphi agrees with finite differences of phi") {
    CorpusEntry e = flat_projective_pair(3);
    const double h = 1e-5;
    for (const auto& p : sample_points(e.metric, 10)) {
        PairAtPoint pa = analyze_pair_at(e.metric, *e.partner, p);
        for (int k = 0; k < 3; ++k) {
            Point a = p, b = p;
            a[k] += h;
            b[k] -= h;
            const double fd = (phi_of_pair(e.metric, *e.partner, a) - phi_of_pair(e.metric, *e.partner, b)) / (2 * h);
            CHECK(std::fabs(fd - pa.dphi[k]) < 1e-6);
        }
        CHECK(phi_of_pair(*e.partner, e.metric, p) == doctest::Approx(-pa.phi));
    }
}

TEST_CASE("a and lambda for affine pairs") {
    MetricSpec g = hyperbolic_metric(3);
    Point p{0.1, 0.2, -0.1};
    PairAtPoint same = a_lambda_of_pair(g, g, p);
    CHECK((same.a - metric_value(g, p)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(same.lambda.cwiseAbs().maxCoeff() < 1e-12);
    for (double c : {2.0, 1.0 / 3, -1.0}) {
        PairAtPoint pa = a_lambda_of_pair(g, scale_metric(g, c), p);
        const double f = std::pow(std::fabs(c), 3.0 / 4) / c;
        CHECK((pa.a - f * metric_value(g, p)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(pa.lambda.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("geodesic equivalence verdicts") {
    MetricSpec g = sphere_metric(2);
    CHECK(check_geodesic_equiv(g, scale_metric(g, 2)).equivalent);

    for (int n : {2, 3, 4}) {
        CorpusEntry e = flat_projective_pair(n);
        PairReport r = check_geodesic_equiv(e.metric, *e.partner);
        CHECK(r.points == 20);
        CHECK(r.equivalent);
        CHECK(r.residual_basic < 1e-7);
        CHECK(r.lambda_mismatch < 1e-6);
        for (const auto& p : sample_points(e.metric, 5)) CHECK_NOTHROW(a_lambda_of_pair(e.metric, *e.partner, p));

        PairReport bad = check_geodesic_equiv(e.metric, perturbed(*e.partner, "0.001*x1^2"));
        CHECK(!bad.equivalent);
    }

    CorpusEntry gn = gnomonic_pair(3);
    CHECK(check_geodesic_equiv(gn.metric, *gn.partner).strong);

    PairReport no = check_geodesic_equiv(flat_metric(2), sphere_metric(2));
    CHECK(!no.equivalent);
    CHECK(no.residual_lc > 0.1);
    // for conformal pairs the two λ formulas agree identically, so use a sheared partner
    MetricSpec sheared = flat_metric(2);
    sheared.set_component(0, 1, "x1*x2/2");
    Point p{0.5, 0.5};
    CHECK_THROWS_AS(a_lambda_of_pair(flat_metric(2), sheared, p), VerificationError);
}

TEST_CASE("B of the second metric") {
    struct Case {
        MetricSpec m;
        double B;
    };
    for (const Case& c : {Case{sphere_metric(2), -1}, Case{hyperbolic_metric(3), 1}, Case{sphere_metric(3), -1}}) {
        for (double k : {2.0, 1.0 / 3, -1.0}) {
            BarBReport r = bar_B(c.m, scale_metric(c.m, k), c.B, sample_points(c.m, 20));
            CHECK(r.values.size() == 20);
            CHECK(r.mean == doctest::Approx(c.B / k).epsilon(1e-6));
            CHECK(r.spread < 1e-6);
        }
    }
    // same metric, prescribed solution (g, 0, μ0)
    MetricSpec g = sphere_metric(2);
    Point p{0.2, 0.3};
    PairAtPoint pa = a_lambda_of_pair(g, g, p);
    ExtendedSolution sol{metric_value(g, p), Eigen::VectorXd::Zero(2), 0.7};
    CHECK(bar_B(pa, sol) == doctest::Approx(-0.7));

    CorpusEntry gn = gnomonic_pair(3);
    BarBReport s = bar_B(gn.metric, *gn.partner, 0, sample_points(gn.metric, 20));
    CHECK(s.mean == doctest::Approx(-1).epsilon(1e-6));
}

TEST_CASE("projective vector fields") {
    MetricSpec f = flat_metric(3);
    auto pts = sample_points(f, 10);
    ProjectiveFieldReport rot = projective_field_solution(f, field({"-x2", "x1", "0"}), pts);
    CHECK(rot.projective);
    for (const auto& a : rot.a) CHECK(a.cwiseAbs().maxCoeff() < 1e-12);

    ProjectiveFieldReport euler = projective_field_solution(f, field({"x1", "x2", "x3"}), pts);
    CHECK(euler.projective);
    for (const auto& a : euler.a) CHECK((a - 0.5 * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

    ProjectiveFieldReport bad = projective_field_solution(f, field({"x1^2", "0", "0"}), pts);
    CHECK(!bad.projective);
    CHECK(bad.residual == doctest::Approx(2));

    // x (x.∂) is projective for flat space: its flow is by projective maps
    ProjectiveFieldReport proj = projective_field_solution(f, field({"x1*x1", "x1*x2", "x1*x3"}), pts);
    CHECK(proj.projective);
    CHECK_THROWS_AS(projective_field_solution(f, field({"x1"}), pts), InputError);
}
