#include "doctest.h"

#include "geodeq/error.hpp"
#include "geodeq/jet.hpp"
#include "geodeq/metric.hpp"

#include <cmath>

using namespace geodeq;

namespace {

Jet random_jet(const JetSpacePtr& sp, Rng& rng) {
    std::vector<double> c(sp->size());
    for (auto& v : c) v = rng.uniform(-1, 1);
    c[0] += 2.0;
    return Jet(sp, c);
}

double max_rel_diff(const Jet& a, const Jet& b) {
    double m = 0, s = 1e-300;
    for (std::size_t p = 0; p < a.size(); ++p) {
        m = std::max(m, std::fabs(a.coeff(p) - b.coeff(p)));
        s = std::max(s, std::fabs(a.coeff(p)));
    }
    return m / s;
}

}  // namespace

TEST_CASE("jet space sizes and ordering") {
    auto sp = JetSpace::get(3, 4);
    CHECK(sp->size() == 35);  // C(7, 4)
    CHECK(JetSpace::get(9, 4)->size() == 715);
    CHECK(sp->size_upto(1) == 4);
    // degree-1 block is e_1, e_2, e_3 in order
    for (int v = 0; v < 3; ++v) CHECK(sp->index(1 + v)[v] == 1);
    // graded: degrees never decrease
    for (std::size_t p = 1; p < sp->size(); ++p) CHECK(sp->degree(p) >= sp->degree(p - 1));
    int a[3] = {2, 0, 0};
    CHECK(sp->index(sp->position(a))[0] == 2);
    CHECK(sp->position(a) == 4);  // first degree-2 entry
}

TEST_CASE("basic jet arithmetic") {
    auto sp = JetSpace::get(1, 2);
    Jet x = Jet::variable(sp, 0, 0.0);
    Jet one = Jet::constant(sp, 1.0);
    Jet p = (one + x) * (one - x);
    CHECK(p.coeff(0) == doctest::Approx(1));
    CHECK(p.coeff(1) == doctest::Approx(0));
    CHECK(p.coeff(2) == doctest::Approx(-1));

    Jet e = compose(Elementary::Exp, 2.0 * x);
    CHECK(e.coeff(0) == doctest::Approx(1));
    CHECK(e.coeff(1) == doctest::Approx(2));
    CHECK(e.coeff(2) == doctest::Approx(2));

    CHECK_THROWS_AS(reciprocal(x), DomainError);
}

TEST_CASE("partial derivatives") {
    auto sp1 = JetSpace::get(1, 2);
    Jet x = Jet::variable(sp1, 0, 0.0);
    int a2[1] = {2};
    CHECK((x * x).partial(a2) == doctest::Approx(2));
    int a3[1] = {3};
    CHECK_THROWS_AS((x * x).partial(a3), InputError);

    auto sp2 = JetSpace::get(2, 2);
    Jet u = Jet::variable(sp2, 0, 0.0), v = Jet::variable(sp2, 1, 0.0);
    int a11[2] = {1, 1};
    CHECK((u * v).partial(a11) == doctest::Approx(1));
}

TEST_CASE("ring axioms on random jets") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto sp = JetSpace::get(1 + rng.below(4), rng.below(5));
        Jet a = random_jet(sp, rng), b = random_jet(sp, rng), c = random_jet(sp, rng);
        CHECK(max_rel_diff((a * b) * c, a * (b * c)) < 1e-12);
        CHECK(max_rel_diff(a * (b + c), a * b + a * c) < 1e-12);
        CHECK(max_rel_diff(a * b, b * a) < 1e-12);
        CHECK(max_rel_diff((a / b) * b, a) < 1e-12);
    }
}

TEST_CASE("mixed orders truncate to the lower order") {
    Jet a = Jet::variable(JetSpace::get(2, 3), 0, 1.0);
    Jet b = Jet::variable(JetSpace::get(2, 1), 1, 2.0);
    CHECK((a * b).order() == 1);
    CHECK((a + b).order() == 1);
}

TEST_CASE("elementary compositions match closed forms") {
    auto sp = JetSpace::get(1, 4);
    const double c = 0.7;
    Jet x = Jet::variable(sp, 0, c);
    // d^k/dx^k of log at c: (-1)^{k+1} (k-1)! / c^k
    Jet l = compose(Elementary::Log, x);
    int a[1] = {3};
    CHECK(l.partial(a) == doctest::Approx(2.0 / (c * c * c)));
    Jet s = compose(Elementary::Sin, x);
    CHECK(s.partial(a) == doctest::Approx(-std::cos(c)));
    Jet q = compose(Elementary::Sqrt, x);
    int a2[1] = {2};
    CHECK(q.partial(a2) == doctest::Approx(-0.25 * std::pow(c, -1.5)));
    Jet pr = pow_real(x, 2.5);
    CHECK(pr.partial(a2) == doctest::Approx(2.5 * 1.5 * std::pow(c, 0.5)));
    Jet pi = pow_int(x, -2);
    CHECK(pi.partial(a) == doctest::Approx(-24.0 / std::pow(c, 5)));
    CHECK_THROWS_AS(compose(Elementary::Log, -1.0 * x), DomainError);
    CHECK_THROWS_AS(pow_real(-1.0 * x, 0.5), DomainError);
}

TEST_CASE("matrix jet inverse") {
    Rng rng(3);
    auto sp = JetSpace::get(3, 3);
    MatrixJet m(sp, 3, 3);
    for (std::size_t p = 0; p < sp->size(); ++p)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m.coeff(p)(i, j) = rng.uniform(-1, 1);
    m.coeff(0) += 3 * Eigen::MatrixXd::Identity(3, 3);
    MatrixJet prod = m * m.inverse();
    for (std::size_t p = 0; p < sp->size(); ++p) {
        Eigen::MatrixXd want = Eigen::MatrixXd::Zero(3, 3);
        if (p == 0) want.setIdentity();
        CHECK((prod.coeff(p) - want).cwiseAbs().maxCoeff() < 1e-12);
    }
}
