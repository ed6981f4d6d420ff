#include "doctest.h"

#include "geodeq/error.hpp"
#include "geodeq/prolong.hpp"

#include <cmath>

using namespace geodeq;

namespace {

MetricSpec flat(int n) {
    std::vector<std::string> c;
    std::vector<Interval> box;
    for (int i = 0; i < n; ++i) {
        c.push_back("x" + std::to_string(i + 1));
        box.push_back({-1, 1});
    }
    MetricSpec m("flat", c, box);
    for (int i = 0; i < n; ++i) m.set_component(i, i, "1");
    return m;
}

MetricSpec sphere2() {
    MetricSpec m("sphere2", {"x1", "x2"}, {{-1, 1}, {-1, 1}});
    m.set_component(0, 0, "4/(1 + x1^2 + x2^2)^2");
    m.set_component(1, 1, "4/(1 + x1^2 + x2^2)^2");
    return m;
}

// dr^2 + r^2 g_sphere, which is flat R^3 in disguise
MetricSpec sphere_cone() {
    MetricSpec m("cone(sphere2)", {"r", "x1", "x2"}, {{0.5, 2}, {-1, 1}, {-1, 1}});
    m.set_component(0, 0, "1");
    m.set_component(1, 1, "4*r^2/(1 + x1^2 + x2^2)^2");
    m.set_component(2, 2, "4*r^2/(1 + x1^2 + x2^2)^2");
    return m;
}

// A metric with no symmetry to speak of.
MetricSpec generic2() {
    MetricSpec m("generic", {"x", "y"}, {{0.5, 1.5}, {0.5, 1.5}});
    m.set_component(0, 0, "1 + x^2*y");
    m.set_component(0, 1, "x*y/3");
    m.set_component(1, 1, "2 + sin(x)*y^3");
    return m;
}

}  // namespace

TEST_CASE("flat sections of the tangent bundle") {
    CHECK(flat_section_dim(tangent_connection(flat(3))).dim == 3);
    CHECK(flat_section_dim(tangent_connection(sphere2())).dim == 0);
    CHECK(flat_section_dim(covector_connection(sphere_cone())).dim == 3);
}

TEST_CASE("parallel symmetric forms") {
    // only multiples of g on the round sphere
    auto s = flat_section_dim(symmetric_form_connection(sphere2()));
    CHECK(s.dim == 1);
    Eigen::MatrixXd h = unpack_symmetric(s.basis.col(0), 2);
    Eigen::MatrixXd g = metric_value(sphere2(), s.point);
    CHECK(distance_from_span(s.basis, pack_symmetric(g)) < 1e-8);
    CHECK(std::fabs(h(0, 1)) < 1e-8);

    auto c = flat_section_dim(symmetric_form_connection(sphere_cone()));
    CHECK(c.dim == 6);
    CHECK(c.transported_count == 0);  // flat, nothing to transport

    // transported sphere curvature still annihilates g
    CHECK(s.transported_count > 0);
    CHECK(s.transport_residual < 1e-5);

    CHECK(flat_section_dim(symmetric_form_connection(generic2())).dim == 1);
}

TEST_CASE("connection curvature equals the riemann tensor") {
    MetricSpec m = generic2();
    Point p{0.8, 1.1};
    auto f = connection_curvature(tangent_connection(m), p);
    GeometryAtPoint geo = riemann(m, p, 0);
    REQUIRE(f.size() == 1);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::fabs(f[0](i, j) - geo.riemann(i, j, 0, 1)) < 1e-10);
}

TEST_CASE("generator count grows with derivative order and the kernel shrinks") {
    auto c = symmetric_form_connection(generic2());
    FlatSectionOptions o;
    o.extra_points = 0;
    int prev_gens = -1, prev_dim = 1 << 20;
    for (int d = 0; d <= 2; ++d) {
        o.derivative_order = d;
        auto r = flat_section_dim(c, o);
        CHECK(r.generator_count > prev_gens);
        CHECK(r.dim <= prev_dim);
        prev_gens = r.generator_count;
        prev_dim = r.dim;
    }
}

TEST_CASE("flat section jets solve the transport equation") {
    // g is parallel, so its jet from the value at p must reproduce the metric's Taylor expansion
    MetricSpec m = sphere2();
    auto c = symmetric_form_connection(m);
    Point p{0.3, -0.2};
    auto jets = flat_section_jet(c, p, pack_symmetric(metric_value(m, p)), 3);
    MetricJets mj = metric_jets(m, p, 3);
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) {
            const Jet& s = jets[packed_index(2, i, j)];
            Jet want = mj.g.entry(i, j);
            for (std::size_t a = 0; a < s.size(); ++a) CHECK(std::fabs(s.coeff(a) - want.coeff(a)) < 1e-10);
        }
}

TEST_CASE("transport is invertible and consistent with the round trip") {
    MetricSpec m = sphere2();
    auto c = tangent_connection(m);
    Point a{0.1, 0.2}, b{0.6, -0.4};
    auto vals = coefficient_values(c);
    Eigen::MatrixXd ab = transport_operator(vals, 2, axis_path(a, b, {0, 1}));
    Path back = axis_path(a, b, {0, 1});
    std::reverse(back.begin(), back.end());
    Eigen::MatrixXd ba = transport_operator(vals, 2, back);
    CHECK((ba * ab - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("joint kernel") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 3);
    a(0, 0) = 1;
    a(1, 1) = 2;
    auto k = joint_kernel({a}, 3);
    CHECK(k.dim == 1);
    CHECK(std::fabs(std::fabs(k.basis(2, 0)) - 1) < 1e-12);
    CHECK(joint_kernel({}, 4).dim == 4);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 3);
    // a gap of 3 between kept and dropped values
    b(0, 0) = 1;
    b(1, 1) = 1.5e-8;
    b.conservativeResize(3, 3);
    b.row(2) << 0, 0, 5e-9;
    CHECK_THROWS_AS(joint_kernel({b}, 3), IndecisionError);
}
