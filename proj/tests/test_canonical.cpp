#include "doctest.h"

#include "geodeq/canonical.hpp"
#include "geodeq/corpus.hpp"
#include "geodeq/error.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

using namespace geodeq;

namespace {

Eigen::MatrixXd mat(int n, std::initializer_list<double> v) {
    Eigen::MatrixXd m(n, n);
    auto it = v.begin();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = *it++;
    return m;
}

Eigen::MatrixXd field_matrix(const CorpusEntry& e, const Point& p) {
    Tensor t = field_value(e.metric, *e.L, p);
    const int n = e.metric.dim();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = t(i, j);
    return m;
}

std::vector<PairBlock> sorted(std::vector<PairBlock> b) {
    // computed eigenvalues carry roundoff, so compare them on a coarse grid
    auto key = [](const PairBlock& x) {
        return std::make_tuple(x.complex, std::lround(x.re * 1e6), std::lround(x.im * 1e6), x.size, x.sign);
    };
    std::sort(b.begin(), b.end(), [&](const PairBlock& x, const PairBlock& y) { return key(x) < key(y); });
    return b;
}

// Faddeev-LeVerrier coefficients of det(t I - L).
std::vector<double> charpoly(const Eigen::MatrixXd& L) {
    const int n = static_cast<int>(L.rows());
    std::vector<double> c{1.0};
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k <= n; ++k) {
        M = L * M + c.back() * Eigen::MatrixXd::Identity(n, n);
        c.push_back(-(L * M).trace() / k);
    }
    return c;
}

}  // namespace

TEST_CASE("self-adjointness") {
    Eigen::MatrixXd G = mat(2, {1, 0, 0, -1});
    CHECK(check_self_adjoint(G, Eigen::MatrixXd::Identity(2, 2)));
    CHECK(!check_self_adjoint(G, mat(2, {0, 1, 1, 0})));
    CHECK(check_self_adjoint(G, mat(2, {0, 1, -1, 0})));

    CorpusEntry e = example1();
    Point p{1, 1, 2, 3};
    CHECK(check_self_adjoint(metric_value(e.metric, p), field_matrix(e, p)));
    CHECK_THROWS_AS(canonical_pair_form(G, mat(2, {0, 1, 1, 0})), InputError);
    CHECK_THROWS_AS(canonical_pair_form(mat(2, {1, 1, 1, 1}), Eigen::MatrixXd::Identity(2, 2)), InputError);
}

TEST_CASE("simple canonical forms") {
    PairBlocks d = canonical_pair_form(Eigen::MatrixXd::Identity(2, 2), 2 * Eigen::MatrixXd::Identity(2, 2));
    REQUIRE(d.blocks.size() == 2);
    for (const auto& b : d.blocks) CHECK(b == PairBlock{false, 2, 0, 1, 1});

    // nilpotent block paired by the hyperbolic plane
    PairBlocks j = canonical_pair_form(mat(2, {0, 1, 1, 0}), mat(2, {0, 1, 0, 0}));
    REQUIRE(j.blocks.size() == 1);
    CHECK(j.blocks[0].size == 2);
    CHECK(j.blocks[0].sign == 1);
    CHECK(std::fabs(j.blocks[0].re) < 1e-14);

    // same, with the form negated
    PairBlocks m = canonical_pair_form(mat(2, {0, -1, -1, 0}), mat(2, {0, 1, 0, 0}));
    CHECK(m.blocks[0].sign == -1);

    // a definite form only allows diagonalizable L
    PairBlocks s = canonical_pair_form(mat(3, {2, 0, 0, 0, 1, 0, 0, 0, 3}), mat(3, {1, 0, 0, 0, 2, 0, 0, 0, 3}));
    CHECK(s.blocks.size() == 3);
    for (const auto& b : s.blocks) CHECK(b.sign == 1);
}

TEST_CASE("size-4 complex pairs") {
    Eigen::MatrixXd L8 = mat(4, {0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0});
    Eigen::MatrixXd G8 = mat(4, {0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
    Eigen::MatrixXd L9 = mat(4, {0, 1, 1, 0, -1, 0, 0, 1, 0, 0, 0, 1, 0, 0, -1, 0});
    Eigen::MatrixXd G9 = mat(4, {0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0});

    PairBlocks a = canonical_pair_form(G8, L8);
    REQUIRE(a.blocks.size() == 2);
    for (const auto& b : a.blocks) {
        CHECK(b.complex);
        CHECK(b.size == 1);
        CHECK(b.re == doctest::Approx(0).epsilon(1e-12));
        CHECK(b.im == doctest::Approx(1).epsilon(1e-12));
    }
    CHECK((a.form_G() - G8).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.form_L() - L8).cwiseAbs().maxCoeff() < 1e-12);

    PairBlocks b = canonical_pair_form(G9, L9);
    REQUIRE(b.blocks.size() == 1);
    CHECK(b.blocks[0].complex);
    CHECK(b.blocks[0].size == 2);
    CHECK((b.form_G() - G9).cwiseAbs().maxCoeff() == 0.0);
    CHECK((b.form_L() - L9).cwiseAbs().maxCoeff() < 1e-12);

    // skew endomorphisms commuting with L: a 2-parameter family, nondegenerate unless zero
    auto sk = skew_commutant(G8, L8);
    REQUIRE(sk.size() == 2);
    for (const auto& r : sk) {
        CHECK(std::fabs(r(0, 0)) + std::fabs(r(0, 1)) + std::fabs(r(1, 0)) + std::fabs(r(1, 1)) < 1e-12);
        CHECK(r(0, 2) == doctest::Approx(-r(3, 1)).epsilon(1e-12));
        CHECK(r(0, 3) == doctest::Approx(r(3, 0)).epsilon(1e-12));
        CHECK(std::fabs(r.determinant()) > 1e-3);
    }
    CHECK(std::fabs((sk[0] + 0.7 * sk[1]).determinant()) > 1e-3);
    CHECK(skew_commutant(G9, L9).empty());
}

TEST_CASE("jordan structure") {
    Eigen::MatrixXd n = Eigen::MatrixXd::Zero(4, 4);
    n(0, 1) = 1;
    auto j = jordan_structure(n);
    REQUIRE(j.size() == 1);
    CHECK(j[0].partition == std::vector<int>{2, 1, 1});
    CHECK(j[0].geometric == 3);

    auto d = jordan_structure(mat(3, {1, 0, 0, 0, 2, 0, 0, 0, 3}));
    REQUIRE(d.size() == 3);
    for (const auto& e : d) CHECK(e.partition == std::vector<int>{1});

    auto c = jordan_structure(mat(4, {0, 1, 1, 0, -1, 0, 0, 1, 0, 0, 0, 1, 0, 0, -1, 0}));
    REQUIRE(c.size() == 1);
    CHECK(c[0].im == doctest::Approx(1));
    CHECK(c[0].partition == std::vector<int>{2});

    CHECK_THROWS_AS(jordan_structure(mat(2, {1, 0, 0, 1 + 5e-7})), IndecisionError);
    CHECK(jordan_structure(mat(2, {1, 0, 0, 1 + 1e-3})).size() == 2);
}

TEST_CASE("example 2 endomorphism") {
    CorpusEntry e = example2();
    for (const auto& p : sample_points(e.metric, 5)) {
        CHECK(cov_deriv(e.metric, *e.L, p).max_abs() < 1e-9);
        Eigen::MatrixXd L = field_matrix(e, p);
        CHECK((L * L).cwiseAbs().maxCoeff() < 1e-12);
        auto js = jordan_structure(L);
        REQUIRE(js.size() == 1);
        CHECK(std::fabs(js[0].re) < 1e-9);
        CHECK(js[0].partition == std::vector<int>{2, 2, 2});
        CHECK(js[0].ranks[1] == 3);
        PairBlocks pb = canonical_pair_form(metric_value(e.metric, p), L);
        CHECK(pb.blocks.size() == 3);
        for (const auto& b : pb.blocks) CHECK(b.size == 2);
    }
    // top-left corner at r = 1, s = 0
    Point p = box_center(e.metric);
    p[0] = 1;
    p[1] = 0;
    Eigen::MatrixXd L = field_matrix(e, p).topLeftCorner(2, 2);
    Eigen::MatrixXd G = metric_value(e.metric, p).topLeftCorner(2, 2);
    PairBlocks pb = canonical_pair_form(G, L);
    REQUIRE(pb.blocks.size() == 1);
    CHECK(!pb.blocks[0].complex);
    CHECK(pb.blocks[0].size == 2);
    CHECK(std::fabs(pb.blocks[0].re) < 1e-12);
}

TEST_CASE("random pairs round trip") {
    for (Signature sig : {Signature{0, 4}, Signature{1, 3}, Signature{2, 2}}) {
        Rng rng(1000 + sig.first);
        for (int t = 0; t < 100; ++t) {
            RandomPair rp = random_self_adjoint_pair(sig, rng);
            REQUIRE(check_self_adjoint(rp.G, rp.L));
            REQUIRE(signature_of(rp.G) == sig);
            PairBlocks pb = canonical_pair_form(rp.G, rp.L);
            CHECK(pb.residual_G < 1e-8);
            CHECK(pb.residual_L < 1e-8);
            CHECK(reconstruction_residual(pb, rp.G, rp.L) < 1e-8);
            CHECK(signature_of(pb.form_G()) == sig);

            auto want = sorted(rp.blocks);
            auto got = sorted(pb.blocks);
            REQUIRE(got.size() == want.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].complex == want[i].complex);
                CHECK(got[i].size == want[i].size);
                CHECK(got[i].sign == want[i].sign);
                CHECK(std::fabs(got[i].re - want[i].re) < 1e-8);
                CHECK(std::fabs(got[i].im - want[i].im) < 1e-8);
            }
            auto a = charpoly(rp.L), b = charpoly(pb.form_L());
            for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(a[i] - b[i]) <= 1e-8 * std::max(1.0, std::fabs(a[i])));
        }
    }
}

TEST_CASE("at most two long blocks for a single eigenvalue") {
    for (int n : {3, 4, 5}) {
        for (Signature sig : {Signature{1, n}, Signature{n - 1, 2}}) {
            Rng rng(77 + n);
            for (int t = 0; t < 30; ++t) {
                RandomPair rp = random_self_adjoint_pair(sig, rng, true);
                auto js = jordan_structure(rp.L);
                REQUIRE(js.size() == 1);
                const auto longs = std::count_if(js[0].partition.begin(), js[0].partition.end(), [](int s) { return s >= 2; });
                CHECK(longs <= 2);
                if (sig.first == 1) CHECK(longs <= 1);
            }
        }
    }
}
