#include "doctest.h"

#include "geodeq/error.hpp"
#include "geodeq/expr.hpp"
#include "geodeq/metric.hpp"

#include <cmath>
#include <functional>

using namespace geodeq;

namespace {

int count_kind(const Expr& e, Expr::Kind k) {
    int c = e.kind() == k ? 1 : 0;
    for (const auto& ch : e.children()) c += count_kind(ch, k);
    return c;
}

int count_leaves(const Expr& e) {
    if (e.children().empty()) return 1;
    int c = 0;
    for (const auto& ch : e.children()) c += count_leaves(ch);
    return c;
}

// Random expressions that stay inside their domain on [-1, 1]^n.
Expr random_expr(Rng& rng, const std::vector<std::string>& vars, int depth) {
    if (depth == 0 || rng.uniform() < 0.25) {
        if (rng.uniform() < 0.6) return Expr::variable(vars[rng.below(static_cast<int>(vars.size()))]);
        return Expr::number(std::round(rng.uniform(-3, 3) * 4) / 4);
    }
    Expr a = random_expr(rng, vars, depth - 1);
    Expr b = random_expr(rng, vars, depth - 1);
    Expr two = Expr::number(2);
    switch (rng.below(10)) {
        case 0: return a + b;
        case 1: return a - b;
        case 2: return a * b;
        case 3: return a / (two + Expr::pow(b, two));
        case 4: return Expr::call(Elementary::Exp, Expr::call(Elementary::Sin, a));
        case 5: return Expr::call(Elementary::Log, two + Expr::call(Elementary::Cos, a));
        case 6: return Expr::call(Elementary::Sqrt, Expr::number(1) + a * a);
        case 7: return Expr::pow(Expr::number(1.5) + Expr::call(Elementary::Sin, a), Expr::number(2.5));
        case 8: return -Expr::pow(a, Expr::number(3));
        default: return Expr::call(Elementary::Cos, a * b);
    }
}

bool close(double a, double b, double rel) { return std::fabs(a - b) <= rel * std::max(1.0, std::fabs(a)); }

}  // namespace

TEST_CASE("parse shapes") {
    Expr e = parse_expr("x1*x4 + x2*x3");
    CHECK(count_leaves(e) == 4);
    CHECK(count_kind(e, Expr::Kind::Mul) == 2);
    CHECK(count_kind(e, Expr::Kind::Add) == 1);

    Expr f = parse_expr("r^2 * exp(2*s)");
    CHECK(count_kind(f, Expr::Kind::Pow) == 1);
    CHECK(count_kind(f, Expr::Kind::Call) == 1);
    CHECK(f.children()[1].function() == Elementary::Exp);
}

TEST_CASE("syntax errors carry byte offsets") {
    try {
        parse_expr("1/(x1");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 5);
    }
    CHECK_THROWS_AS(parse_expr("x +* y"), SyntaxError);
    CHECK_THROWS_AS(parse_expr("foo(x)"), SyntaxError);
    CHECK_THROWS_AS(parse_expr(""), SyntaxError);
    CHECK_NOTHROW(parse_expr("unknown_name + 1"));
}

TEST_CASE("precedence and associativity") {
    std::vector<std::string> c{"x"};
    double p[1] = {3};
    CHECK(parse_expr("-x^2").eval(p, c) == doctest::Approx(-9));
    CHECK(parse_expr("2^3^2").eval(p, c) == doctest::Approx(512));
    CHECK(parse_expr("8/4/2").eval(p, c) == doctest::Approx(1));
    CHECK(parse_expr("8-4-2").eval(p, c) == doctest::Approx(2));
    CHECK(parse_expr("x^-1").eval(p, c) == doctest::Approx(1.0 / 3));
    CHECK(parse_expr("pow(x, 2) + 1e-1").eval(p, c) == doctest::Approx(9.1));
}

TEST_CASE("eval_jet examples") {
    std::vector<std::string> c{"x1", "x2"};
    double p[2] = {2, 3};
    Jet j = parse_expr("x1*x2").eval_jet(p, 1, c);
    CHECK(j.value() == doctest::Approx(6));
    CHECK(j.coeff(1) == doctest::Approx(3));
    CHECK(j.coeff(2) == doctest::Approx(2));

    std::vector<std::string> cs{"s"};
    double s0[1] = {0};
    Jet e = parse_expr("exp(2*s)").eval_jet(s0, 2, cs);
    int a1[1] = {1}, a2[1] = {2};
    CHECK(e.value() == doctest::Approx(1));
    CHECK(e.partial(a1) == doctest::Approx(2));
    CHECK(e.partial(a2) == doctest::Approx(4));
}

TEST_CASE("domain and identifier errors") {
    std::vector<std::string> c{"x1"};
    double p[1] = {0};
    CHECK_THROWS_AS(parse_expr("log(x1)").eval_jet(p, 1, c), DomainError);
    try {
        parse_expr("1 + sqrt(x1 - 1)").eval(p, c);
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("sqrt(x1 - 1)") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_expr("1/x1").eval(p, c), DomainError);
    CHECK_THROWS_AS(parse_expr("y").eval(p, c), InputError);
    CHECK_THROWS_AS(parse_expr("(-1)^0.5").eval(p, c), DomainError);
    CHECK(parse_expr("(-2)^3").eval(p, c) == doctest::Approx(-8));
}

TEST_CASE("print then parse evaluates identically") {
    Rng rng(11);
    std::vector<std::string> vars{"x", "y", "z"};
    for (int t = 0; t < 300; ++t) {
        Expr e = random_expr(rng, vars, 4);
        Expr back = parse_expr(e.to_string());
        double p[3] = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Jet a = e.eval_jet(p, 2, vars), b = back.eval_jet(p, 2, vars);
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.coeff(k) == b.coeff(k));
    }
    CHECK(parse_expr("a - (b - c)").to_string() == "a - (b - c)");
    CHECK(parse_expr("(a^b)^c").to_string() == "(a^b)^c");
    CHECK(parse_expr("-(x*y)").to_string() == "-(x*y)");
}

TEST_CASE("jets agree with central finite differences on random expressions") {
    Rng rng(2024);
    const double h = 1e-5;
    std::vector<std::string> all{"x", "y", "z"};
    for (int t = 0; t < 1000; ++t) {
        const int n = 1 + rng.below(3);
        std::vector<std::string> vars(all.begin(), all.begin() + n);
        Expr e = random_expr(rng, vars, 3);
        Point p(n);
        for (auto& v : p) v = rng.uniform(-1, 1);
        Jet j = e.eval_jet(p, 2, vars);
        auto sp = j.space();
        for (int a = 0; a < n; ++a) {
            Point pp = p, pm = p;
            pp[a] += h;
            pm[a] -= h;
            // first derivative from values
            const double fd1 = (e.eval(pp, vars) - e.eval(pm, vars)) / (2 * h);
            CHECK(close(j.coeff(1 + a), fd1, 1e-6));
            // second derivatives from differences of the exact gradient
            Jet jp = e.eval_jet(pp, 1, vars), jm = e.eval_jet(pm, 1, vars);
            for (int b = 0; b < n; ++b) {
                const double fd2 = (jp.coeff(1 + b) - jm.coeff(1 + b)) / (2 * h);
                std::vector<int> alpha(n, 0);
                ++alpha[a];
                ++alpha[b];
                CHECK(close(j.partial(alpha), fd2, 1e-6));
            }
        }
    }
}
