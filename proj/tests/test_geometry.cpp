#include "doctest.h"

#include "geodeq/error.hpp"
#include "geodeq/geometry.hpp"

#include <cmath>
#include <numbers>

using namespace geodeq;

namespace {

MetricSpec flat(int n, int negatives = 0) {
    std::vector<std::string> c;
    std::vector<Interval> box;
    for (int i = 0; i < n; ++i) {
        c.push_back("x" + std::to_string(i + 1));
        box.push_back({-1, 1});
    }
    MetricSpec m("flat", c, box);
    for (int i = 0; i < n; ++i) m.set_component(i, i, i < negatives ? "-1" : "1");
    return m;
}

MetricSpec sphere2() {
    MetricSpec m("sphere2", {"x1", "x2"}, {{-1, 1}, {-1, 1}});
    m.set_component(0, 0, "4/(1 + x1^2 + x2^2)^2");
    m.set_component(1, 1, "4/(1 + x1^2 + x2^2)^2");
    return m;
}

MetricSpec polar_cone_circle() {
    MetricSpec m("cone over S1", {"r", "th"}, {{0.5, 3}, {-1, 1}});
    m.set_component(0, 0, "1");
    m.set_component(1, 1, "r^2");
    return m;
}

// Christoffel symbols from central differences of g.
Tensor christoffel_fd(const MetricSpec& m, const Point& p, double h) {
    const int n = m.dim();
    std::vector<Eigen::MatrixXd> dg(n);
    for (int k = 0; k < n; ++k) {
        Point a = p, b = p;
        a[k] += h;
        b[k] -= h;
        dg[k] = (metric_value(m, a) - metric_value(m, b)) / (2 * h);
    }
    Eigen::MatrixXd gi = metric_value(m, p).inverse();
    Tensor t(n, 3);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0;
                for (int a = 0; a < n; ++a) s += 0.5 * gi(i, a) * (-dg[a](j, k) + dg[j](a, k) + dg[k](j, a));
                t(i, j, k) = s;
            }
    return t;
}

}  // namespace

TEST_CASE("christoffel examples") {
    Point p{0.1, 0.2, 0.3};
    CHECK(christoffel(flat(3), p).max_abs() == 0.0);

    Point q{2, 0};
    Tensor g = christoffel(polar_cone_circle(), q);
    CHECK(g(1, 0, 1) == doctest::Approx(0.5));
    CHECK(g(1, 1, 0) == doctest::Approx(0.5));
    CHECK(g(0, 1, 1) == doctest::Approx(-2));
    CHECK(g(0, 0, 0) == 0.0);
    CHECK(g(1, 1, 1) == 0.0);

    Point s{0.3, -0.1};
    Tensor a = christoffel(sphere2(), s);
    Tensor b = christoffel_fd(sphere2(), s, 1e-5);
    for (std::size_t i = 0; i < a.data().size(); ++i) CHECK(std::fabs(a.data()[i] - b.data()[i]) < 1e-7);
}

TEST_CASE("riemann of flat and spherical metrics") {
    Point p{0.1, 0.2, 0.3, 0.4};
    CHECK(riemann(flat(4, 1), p, 2).riemann.max_abs() == 0.0);

    // unit sphere: R_ijkl = g_ik g_jl - g_il g_jk under our convention
    Point s{0.3, -0.1};
    GeometryAtPoint geo = riemann(sphere2(), s, 1);
    Tensor low = lower_first(geo.riemann, geo.g);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    const double want = geo.g(i, k) * geo.g(j, l) - geo.g(i, l) * geo.g(j, k);
                    CHECK(std::fabs(low(i, j, k, l) - want) < 1e-10);
                }
    // constant curvature: ∇R = 0
    CHECK(geo.nabla_riemann->max_abs() < 1e-10);
    CHECK(geo.signature == Signature{0, 2});
}

TEST_CASE("degenerate metric is rejected") {
    MetricSpec m("deg", {"x", "y"}, {{-1, 1}, {-1, 1}});
    m.set_component(0, 0, "x");
    m.set_component(1, 1, "1");
    Point p{0.0, 0.5};
    CHECK_THROWS_AS(christoffel(m, p), DegenerateMetric);
}

TEST_CASE("cov_deriv of the metric vanishes") {
    MetricSpec m = sphere2();
    TensorField g{0, 2, {m.component(0, 0), m.component(0, 1), m.component(1, 0), m.component(1, 1)}};
    Point p{0.4, 0.7};
    CHECK(cov_deriv(m, g, p).max_abs() < 1e-12);
}

TEST_CASE("parallel transport") {
    MetricSpec f = flat(3);
    Path loop{{0, 0, 0}, {0.5, 0, 0}, {0.5, 0.5, 0.2}, {0, 0.5, 0}, {0, 0, 0}};
    Eigen::MatrixXd pt = transport_operator(tangent_coefficients(f), 3, loop);
    CHECK((pt - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);

    // holonomy angle of a small square on S^2 is K * area
    MetricSpec s = sphere2();
    const double h = 0.05;
    const Point c{0.2, 0.1};
    Path sq{{c[0], c[1]}, {c[0] + h, c[1]}, {c[0] + h, c[1] + h}, {c[0], c[1] + h}, {c[0], c[1]}};
    Eigen::VectorXd v(2);
    v << 1, 0;
    Eigen::VectorXd w = parallel_transport(s, sq, v);
    Eigen::MatrixXd g = metric_value(s, c);
    const double cosang = v.dot(g * w) / std::sqrt(v.dot(g * v) * w.dot(g * w));
    const double angle = std::acos(std::min(1.0, cosang));
    // Gauss-Bonnet oracle: area from the exact area element integrated over the square
    double area = 0;
    const int q = 40;
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) {
            Point x{c[0] + (i + 0.5) * h / q, c[1] + (j + 0.5) * h / q};
            area += std::sqrt(metric_value(s, x).determinant()) * (h / q) * (h / q);
        }
    CHECK(std::fabs(angle - area) < 0.05 * area);

    Eigen::MatrixXd gb = parallel_transport_form(s, sq, g);
    CHECK((gb - g).cwiseAbs().maxCoeff() < 1e-8);
}
