#include "geodeq/verify.hpp"

#include "geodeq/canonical.hpp"
#include "geodeq/corpus.hpp"
#include "geodeq/error.hpp"
#include "geodeq/mobility.hpp"
#include "geodeq/pairs.hpp"
#include "geodeq/prolong.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace geodeq {

namespace {

int max_dim(int n) { return (n + 1) * (n + 2) / 2; }

double curvature_scale(const GeometryAtPoint& g) { return std::max(1.0, g.riemann.max_abs()); }

Eigen::MatrixXd field_matrix(const MetricSpec& m, const TensorField& L, const Point& p) {
    const Tensor t = field_value(m, L, p);
    const int n = m.dim();
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = t(i, j);
    return out;
}

// Jet in the base variables of a cone, given a jet on (r, x).
Jet drop_r(const Jet& j, int n) {
    std::vector<double> c(n + 1);
    c[0] = j.value();
    for (int k = 0; k < n; ++k) c[1 + k] = j.coeff(2 + k);
    return Jet(JetSpace::get(n, 1), c);
}

// Jet on (r, x) that does not depend on r.
Jet add_r(const Jet& j, int n) {
    std::vector<double> c(n + 2, 0.0);
    c[0] = j.value();
    for (int k = 0; k < n; ++k) c[2 + k] = j.coeff(1 + k);
    return Jet(JetSpace::get(n + 1, 1), c);
}

class Checks {
public:
    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed_ = false;
            if (!failed_.empty()) failed_ += "; ";
            failed_ += what;
        }
    }
    void note(const std::string& s) {
        if (!notes_.empty()) notes_ += ", ";
        notes_ += s;
    }
    bool passed() const { return passed_; }
    std::string detail() const { return passed_ ? notes_ : "failed: " + failed_ + (notes_.empty() ? "" : " | " + notes_); }

private:
    bool passed_ = true;
    std::string failed_, notes_;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

void flat_maximum(Checks& c) {
    const MobilityReport r = extended_mobility(flat_metric(3), 0);
    c.note("flat3 B=0: D=" + std::to_string(r.D));
    c.require(r.D == max_dim(3), "D(flat3) != 10");
}

void sphere_via_cone(Checks& c) {
    const MetricSpec s2 = sphere_metric(2);
    const ConeBuild cone = build_cone(s2);
    const double curv = max_curvature(cone.total, sample_points(cone.total, 20));
    c.note("cone curvature " + fmt(curv));
    c.require(curv < 1e-8, "cone over S2 is not flat");
    const int d2 = extended_mobility(s2, -1).D;
    const int d3 = extended_mobility(sphere_metric(3), -1).D;
    c.note("S2 B=-1: D=" + std::to_string(d2) + ", S3 B=-1: D=" + std::to_string(d3));
    c.require(d2 == max_dim(2), "D(S2) is not (n+1)(n+2)/2 = 6");
    c.require(d3 == max_dim(3), "D(S3) is not 10");
    const MobilityReport via = cone_mobility(s2);
    c.require(via.constant_curvature && via.D == max_dim(2), "cone route disagrees on S2");
    const BSearchResult s = search_B(s2);
    c.note("search_B best " + fmt(s.best_B) + " dim " + std::to_string(s.best_dim));
    c.require(s.conclusive && std::fabs(s.best_B + 1) < 1e-6 && s.best_dim == max_dim(2), "search_B misses B = -1");
}

void example_one(Checks& c) {
    const CorpusEntry e = example1();
    double nabla = 0;
    for (const auto& p : sample_points(e.metric, 20)) nabla = std::max(nabla, cov_deriv(e.metric, *e.L, p).max_abs());
    const Point p{1, 1, 2, 3};
    const GeometryAtPoint g = riemann(e.metric, p);
    const Eigen::MatrixXd L = field_matrix(e.metric, *e.L, p);
    double lr = 0;
    for (int q = 0; q < 4; ++q) lr += L(0, q) * g.riemann(q, 3, 2, 3);
    c.note("max |∇L| " + fmt(nabla) + ", L^1_p R^p_434 = " + fmt(lr));
    c.require(nabla < 1e-9, "L is not parallel");
    c.require(std::fabs(lr) > 1e-6, "L^1_p R^p_434 vanishes");
}

void example_two(Checks& c) {
    const CorpusEntry e = example2();
    const HomReport h = check_hom(e.metric, *e.potential);
    c.note("hom residuals " + fmt(h.hessian_residual) + "/" + fmt(h.gradient_residual));
    c.require(h.verdict == HomVerdict::Cone && h.hessian_residual < 1e-9 && h.gradient_residual < 1e-9,
              "r^2/2 fails the potential equations");
    double nabla = 0, lr = 0, sq = 0;
    bool jordan_ok = true;
    for (const auto& p : sample_points(e.metric, 20)) {
        nabla = std::max(nabla, cov_deriv(e.metric, *e.L, p).max_abs());
        lr = std::max(lr, max_L_times_R(e.metric, *e.L, p));
        const Eigen::MatrixXd L = field_matrix(e.metric, *e.L, p);
        sq = std::max(sq, (L * L).cwiseAbs().maxCoeff());
        const auto js = jordan_structure(L);
        jordan_ok = jordan_ok && js.size() == 1 && std::fabs(js[0].re) < 1e-9 && std::fabs(js[0].im) == 0 &&
                    js[0].partition == std::vector<int>{2, 2, 2};
    }
    c.note("max |∇L| " + fmt(nabla) + ", max |L^2| " + fmt(sq) + ", max |L.R| " + fmt(lr));
    c.require(nabla < 1e-9, "L is not parallel");
    c.require(sq < 1e-12, "L^2 != 0");
    c.require(jordan_ok, "Jordan type is not 2+2+2 at eigenvalue 0");
    c.require(lr > 1e-6, "L.R vanishes");
}

void realizations(Checks& c) {
    struct Case {
        int n, k;
        std::vector<int> parts;
    };
    for (const Case& x : {Case{7, 0, {4, 4}}, Case{5, 2, {4}}, Case{8, 0, {3, 3, 3}}, Case{6, 1, {3, 3}}}) {
        const CorpusEntry e = realization(x.n, x.k, x.parts);
        const MobilityReport r = cone_mobility(ConeFactor{e.metric, *e.potential});
        const int ell = static_cast<int>(x.parts.size());
        const int want = x.k * (x.k + 1) / 2 + ell;
        c.note(e.name + ": D=" + std::to_string(r.D) + " k=" + (r.k ? std::to_string(*r.k) : "-") +
               " l=" + (r.ell ? std::to_string(*r.ell) : "-"));
        c.require(r.D == want, e.name + " D != " + std::to_string(want));
        c.require(r.k && *r.k == x.k && r.ell && *r.ell == ell, e.name + " k or l differ from the construction");
        c.require(x.k <= x.n - 2 && ell <= (x.n - x.k + 1) / 3 && r.bounds_ok.value_or(false),
                  e.name + " violates the bounds");
    }
}

void round_trip(Checks& c) {
    const RoundTripReport r = correspondence_round_trip();
    c.note("cone forms " + std::to_string(r.cone_dim) + ", base residual " + fmt(r.base_residual) + ", cone residual " +
           fmt(r.cone_residual));
    c.require(r.distance_from_metric > 0.1, "only the cone metric itself was found");
    c.require(r.base_residual < 1e-7, "unpacked fields do not solve the extended system");
    c.require(r.cone_residual < 1e-7, "lifted form is not parallel");
}

void b_transformation(Checks& c) {
    struct Case {
        MetricSpec m;
        double B;
    };
    for (const Case& x : {Case{sphere_metric(2), -1}, Case{sphere_metric(3), -1}, Case{hyperbolic_metric(3), 1}}) {
        for (double k : {2.0, 1.0 / 3, -1.0}) {
            const MetricSpec gb = scale_metric(x.m, k);
            const BarBReport r = bar_B(x.m, gb, x.B, sample_points(x.m, 20));
            const double want = x.B / k;
            const double rel = std::fabs(r.mean - want) / std::fabs(want);
            c.require(rel < 1e-6 && r.spread < 1e-6 && r.values.size() == 20,
                      x.m.label() + " c=" + fmt(k) + ": B̄ " + fmt(r.mean) + " != " + fmt(want));
            // the scaled metric carries B/c in its own extended system
            c.require(extended_mobility(gb, want).D == max_dim(x.m.dim()), x.m.label() + " c=" + fmt(k) + ": D drops");
        }
        c.note(x.m.label() + " ok");
    }
}

void pair_certification(Checks& c) {
    const CorpusEntry e = flat_projective_pair(3);
    const PairReport r = check_geodesic_equiv(e.metric, *e.partner);
    MetricSpec bent = *e.partner;
    bent.set_component(0, 0, bent.component(0, 0) + parse_expr("0.001*x1^2"));
    const PairReport b = check_geodesic_equiv(e.metric, bent);
    c.note("residual " + fmt(std::max(r.residual_lc, r.residual_basic)) + ", perturbed " +
           fmt(std::max(b.residual_lc, b.residual_basic)));
    c.require(r.equivalent, "corpus pair is not certified");
    c.require(!b.equivalent, "perturbed pair is still certified");
}

void canonical_round_trips(Checks& c) {
    double worst = 0;
    int structure_misses = 0;
    for (Signature sig : {Signature{0, 4}, Signature{1, 3}, Signature{2, 2}}) {
        Rng rng(1000 + sig.first);
        for (int t = 0; t < 100; ++t) {
            const RandomPair rp = random_self_adjoint_pair(sig, rng);
            const PairBlocks pb = canonical_pair_form(rp.G, rp.L);
            worst = std::max(worst, reconstruction_residual(pb, rp.G, rp.L));
            if (signature_of(pb.form_G()) != sig || pb.blocks.size() != rp.blocks.size()) ++structure_misses;
        }
    }
    c.note("300 pairs, worst residual " + fmt(worst));
    c.require(worst < 1e-8, "reconstruction residual too large");
    c.require(structure_misses == 0, std::to_string(structure_misses) + " block structures differ");

    auto mat = [](std::initializer_list<double> v) {
        Eigen::MatrixXd m(4, 4);
        auto it = v.begin();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) m(i, j) = *it++;
        return m;
    };
    const Eigen::MatrixXd L8 = mat({0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0});
    const Eigen::MatrixXd G8 = mat({0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
    const Eigen::MatrixXd L9 = mat({0, 1, 1, 0, -1, 0, 0, 1, 0, 0, 0, 1, 0, 0, -1, 0});
    const Eigen::MatrixXd G9 = mat({0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0});
    const PairBlocks a = canonical_pair_form(G8, L8);
    const PairBlocks b = canonical_pair_form(G9, L9);
    c.require(a.blocks.size() == 2 && a.blocks[0].complex && a.blocks[1].complex &&
                  (a.form_G() - G8).cwiseAbs().maxCoeff() == 0 && (a.form_L() - L8).cwiseAbs().maxCoeff() < 1e-12,
              "first size-4 complex pair not reproduced");
    c.require(b.blocks.size() == 1 && b.blocks[0].complex && b.blocks[0].size == 2 &&
                  (b.form_G() - G9).cwiseAbs().maxCoeff() == 0 && (b.form_L() - L9).cwiseAbs().maxCoeff() < 1e-12,
              "second size-4 complex pair not reproduced");
    const auto s8 = skew_commutant(G8, L8);
    const auto s9 = skew_commutant(G9, L9);
    bool nondegenerate = true;
    for (const auto& r : s8) nondegenerate = nondegenerate && std::fabs(r.determinant()) > 1e-3;
    c.note("skew commutants " + std::to_string(s8.size()) + " and " + std::to_string(s9.size()));
    c.require(s8.size() == 2 && nondegenerate, "first size-4 complex pair should have two commuting skew endomorphisms");
    c.require(s9.empty(), "second size-4 complex pair admits commuting skew endomorphisms");
}

void property_suites(Checks& c) {
    std::vector<MetricSpec> metrics{sphere_metric(3), hyperbolic_metric(3), flat_metric(3, 1), example1().metric,
                                    example2().metric, realization(5, 2, {4}).metric};
    double sym = 0, bianchi = 0, fd = 0, rfd = 0;
    for (const auto& m : metrics)
        for (const auto& p : sample_points(m, 5)) {
            const GeometryAtPoint g = riemann(m, p);
            sym = std::max(sym, curvature_symmetry_residual(g));
            bianchi = std::max(bianchi, bianchi_residual(g));
            fd = std::max(fd, christoffel_fd_error(m, p));
            rfd = std::max(rfd, riemann_fd_error(m, p));
        }
    c.note("symmetries " + fmt(sym) + ", bianchi " + fmt(bianchi) + ", AD-FD " + fmt(std::max(fd, rfd)));
    c.require(sym < 1e-9, "curvature symmetries");
    c.require(bianchi < 1e-9, "first Bianchi identity");
    c.require(fd < 1e-6 && rfd < 1e-6, "AD and finite differences disagree");

    double cone = 0;
    for (const MetricSpec& base : {sphere_metric(2), flat_metric(3, 1), *example2().base}) {
        const ConeBuild cb = build_cone(base);
        for (const auto& p : sample_points(cb.total, 10)) cone = std::max(cone, cone_christoffel_error(cb, p));
    }
    c.note("cone Christoffel " + fmt(cone));
    c.require(cone < 1e-9, "closed-form cone Christoffel symbols");

    double ricci = 0;
    for (const CorpusEntry& e : {example1(), example2()})
        for (const auto& p : sample_points(e.metric, 10)) ricci = std::max(ricci, ricci_identity_residual(e.metric, *e.L, p));
    c.note("L.R - R.L " + fmt(ricci));
    c.require(ricci < 1e-8, "parallel L does not commute with curvature");

    // integer outputs across seeds
    const CorpusEntry real = realization(6, 1, {3, 3});
    const CorpusEntry ex2 = example2();
    const CorpusEntry pair = flat_projective_pair(3);
    bool stable = true;
    for (std::uint64_t seed : {1u, 7u, 42u, 1234u, 99999u}) {
        FlatSectionOptions o;
        o.seed = seed;
        const MobilityReport cm = cone_mobility(ConeFactor{real.metric, *real.potential}, o);
        stable = stable && cm.D == 3 && cm.k == 1 && cm.ell == 2;
        stable = stable && extended_mobility(sphere_metric(2), -1, o).D == 6;
        stable = stable && extended_mobility(flat_metric(3), 0, o).D == 10;
        BSearchOptions bo;
        bo.engine.seed = seed;
        const BSearchResult s = search_B(sphere_metric(2), bo);
        stable = stable && s.best_dim == 6;
        const Point p = sample_points(ex2.metric, 1, seed)[0];
        stable = stable && jordan_structure(field_matrix(ex2.metric, *ex2.L, p))[0].partition == std::vector<int>{2, 2, 2};
        stable = stable && check_geodesic_equiv(pair.metric, *pair.partner, sample_points(pair.metric, 20, seed)).equivalent;
    }
    c.require(stable, "an integer output changed with the seed");
}

struct Criterion {
    const char* title;
    double limit;
    std::function<void(Checks&)> body;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> s{
        {"flat maximum", 10, flat_maximum},
        {"sphere via cone", 60, sphere_via_cone},
        {"example 1", 5, example_one},
        {"example 2", 10, example_two},
        {"realization instances", 300, realizations},
        {"correspondence round trip", 0, round_trip},
        {"B transformation", 0, b_transformation},
        {"pair certification", 0, pair_certification},
        {"canonical form round trips", 0, canonical_round_trips},
        {"property suites", 0, property_suites},
    };
    return s;
}

}  // namespace

double curvature_symmetry_residual(const GeometryAtPoint& g) {
    const Tensor low = lower_first(g.riemann, g.g);
    const int n = low.n();
    double r = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double v = low(i, j, k, l);
                    r = std::max({r, std::fabs(v + low(j, i, k, l)), std::fabs(v + low(i, j, l, k)),
                                  std::fabs(v - low(k, l, i, j))});
                }
    return r / std::max(1.0, low.max_abs());
}

double bianchi_residual(const GeometryAtPoint& g) {
    const Tensor& R = g.riemann;
    const int n = R.n();
    double r = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) r = std::max(r, std::fabs(R(i, j, k, l) + R(i, k, l, j) + R(i, l, j, k)));
    return r / curvature_scale(g);
}

double christoffel_fd_error(const MetricSpec& m, const Point& p, double h) {
    const int n = m.dim();
    std::vector<Eigen::MatrixXd> dg(n);
    for (int k = 0; k < n; ++k) {
        Point a = p, b = p;
        a[k] += h;
        b[k] -= h;
        dg[k] = (metric_value(m, a) - metric_value(m, b)) / (2 * h);
    }
    const Eigen::MatrixXd gi = metric_value(m, p).inverse();
    const Tensor ad = christoffel(m, p);
    double err = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0;
                for (int a = 0; a < n; ++a) s += 0.5 * gi(i, a) * (-dg[a](j, k) + dg[j](a, k) + dg[k](j, a));
                err = std::max(err, std::fabs(s - ad(i, j, k)));
            }
    return err / std::max(1.0, ad.max_abs());
}

double riemann_fd_error(const MetricSpec& m, const Point& p, double h) {
    const int n = m.dim();
    std::vector<Tensor> dG;
    for (int k = 0; k < n; ++k) {
        Point a = p, b = p;
        a[k] += h;
        b[k] -= h;
        Tensor d = christoffel(m, a);
        const Tensor e = christoffel(m, b);
        for (std::size_t q = 0; q < d.data().size(); ++q) d.data()[q] = (d.data()[q] - e.data()[q]) / (2 * h);
        dG.push_back(d);
    }
    const Tensor G = christoffel(m, p);
    const GeometryAtPoint g = riemann(m, p);
    double err = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = dG[k](i, l, j) - dG[l](i, k, j);
                    for (int q = 0; q < n; ++q) s += G(i, k, q) * G(q, l, j) - G(i, l, q) * G(q, k, j);
                    err = std::max(err, std::fabs(s - g.riemann(i, j, k, l)));
                }
    return err / curvature_scale(g);
}

double cone_christoffel_error(const ConeBuild& c, const Point& p) {
    const Tensor a = cone_christoffel_closed(c, p);
    const Tensor b = christoffel(c.total, p);
    double d = 0;
    for (std::size_t i = 0; i < a.data().size(); ++i) d = std::max(d, std::fabs(a.data()[i] - b.data()[i]));
    return d;
}

double ricci_identity_residual(const MetricSpec& m, const TensorField& L, const Point& p) {
    const Eigen::MatrixXd l = field_matrix(m, L, p);
    const GeometryAtPoint g = riemann(m, p);
    const int n = m.dim();
    double r = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int q = 0; q < n; ++q) {
                    double s = 0;
                    for (int a = 0; a < n; ++a) s += l(i, a) * g.riemann(a, j, k, q) - g.riemann(i, a, k, q) * l(a, j);
                    r = std::max(r, std::fabs(s));
                }
    return r;
}

double max_L_times_R(const MetricSpec& m, const TensorField& L, const Point& p) {
    const Eigen::MatrixXd l = field_matrix(m, L, p);
    const GeometryAtPoint g = riemann(m, p);
    const int n = m.dim();
    double r = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int q = 0; q < n; ++q) {
                    double s = 0;
                    for (int a = 0; a < n; ++a) s += l(i, a) * g.riemann(a, j, k, q);
                    r = std::max(r, std::fabs(s));
                }
    return r;
}

RoundTripReport correspondence_round_trip(std::uint64_t seed) {
    RoundTripReport out;
    const MetricSpec base = sphere_metric(2);
    const ConeBuild c = build_cone(base);
    const LinearConnectionSpec sym = symmetric_form_connection(c.total);
    FlatSectionOptions o;
    o.seed = seed;
    const FlatSectionResult fs = flat_section_dim(sym, o);
    out.cone_dim = fs.dim;
    const Point& P = fs.point;
    const double r = P[0];
    const Point x(P.begin() + 1, P.end());

    // the basis element furthest from the cone metric
    const Eigen::VectorXd ghat = pack_symmetric(metric_value(c.total, P));
    int pick = 0;
    for (int j = 0; j < fs.basis.cols(); ++j) {
        const double d = distance_from_span(ghat, fs.basis.col(j));
        if (d > out.distance_from_metric) {
            out.distance_from_metric = d;
            pick = j;
        }
    }
    const Eigen::VectorXd w = fs.basis.col(pick);

    // cone jet -> base fields
    const auto jets = flat_section_jet(sym, P, w, 1);
    const Jet rj = Jet::variable(jets[0].space(), 0, r);
    auto A = [&](int i, int j) { return jets[packed_index(3, std::min(i, j), std::max(i, j))]; };
    std::vector<Jet> fields;
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) fields.push_back(A(i + 1, j + 1) / (rj * rj));
    for (int i = 0; i < 2; ++i) fields.push_back(-A(0, i + 1) / rj);
    fields.push_back(A(0, 0));
    double r_dependence = 0;
    std::vector<Jet> basef;
    for (const auto& f : fields) {
        r_dependence = std::max(r_dependence, std::fabs(f.coeff(1)));
        basef.push_back(drop_r(f, 2));
    }
    out.base_residual = std::max(r_dependence, extended_residual(base, -1, x, basef).max());

    // base solution -> cone form, which must be parallel
    const ExtendedSolution s = unpack_parallel(unpack_symmetric(w, 3), r);
    const auto sol = flat_section_jet(extended_connection(base, -1), x, to_fiber(s), 1);
    std::vector<Jet> lifted;
    for (const auto& f : sol) lifted.push_back(add_r(f, 2));
    std::vector<Jet> Aj(6);
    Aj[packed_index(3, 0, 0)] = lifted[5];
    for (int i = 0; i < 2; ++i) Aj[packed_index(3, 0, i + 1)] = -(rj * lifted[3 + i]);
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) Aj[packed_index(3, i + 1, j + 1)] = rj * rj * lifted[packed_index(2, i, j)];
    const auto C = sym.coeff(P, 0);
    for (int k = 0; k < 3; ++k) {
        Eigen::VectorXd val(6), d(6);
        for (int q = 0; q < 6; ++q) {
            val[q] = Aj[q].value();
            d[q] = Aj[q].coeff(1 + k);
        }
        out.cone_residual = std::max(out.cone_residual, (d + C[k].value() * val).cwiseAbs().maxCoeff());
    }
    return out;
}

CriterionResult run_criterion(int id) {
    if (id < 1 || id > kCriterionCount) throw InputError("criterion id must be between 1 and 10");
    const Criterion& s = criteria()[id - 1];
    CriterionResult r;
    r.id = id;
    r.title = s.title;
    r.time_limit = s.limit;
    Checks c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        s.body(c);
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s.limit > 0) c.require(r.seconds < s.limit, "took " + fmt(r.seconds) + " s, limit " + fmt(s.limit) + " s");
    r.passed = c.passed();
    r.detail = c.detail();
    return r;
}

std::vector<CriterionResult> run_all_criteria() {
    std::vector<CriterionResult> out;
    for (int i = 1; i <= kCriterionCount; ++i) out.push_back(run_criterion(i));
    return out;
}

}  // namespace geodeq
