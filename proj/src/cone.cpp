#include "geodeq/cone.hpp"

#include "geodeq/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace geodeq {

namespace {

Expr times(const Expr& factor, const Expr& e) {
    if (e.is_number(0)) return e;
    if (e.is_number(1)) return factor;
    return factor * e;
}

}  // namespace

Expr ConeBuild::potential() const {
    return Expr::pow(Expr::variable(r_name), Expr::number(2)) / Expr::number(2);
}

ConeBuild build_cone(const MetricSpec& base, const std::string& r_name, Interval r_range) {
    const int n = base.dim();
    if (n < 1) throw InputError("a cone needs a base of dimension at least 1");
    const auto& bc = base.coords();
    if (std::find(bc.begin(), bc.end(), r_name) != bc.end())
        throw InputError("cone coordinate '" + r_name + "' collides with a base coordinate");
    if (!(r_range.lo > 0 && r_range.hi > r_range.lo)) throw InputError("cone r-range must be positive");
    std::vector<std::string> coords{r_name};
    coords.insert(coords.end(), bc.begin(), bc.end());
    std::vector<Interval> box{r_range};
    box.insert(box.end(), base.box().begin(), base.box().end());
    ConeBuild c;
    c.base = base;
    c.r_name = r_name;
    c.total = MetricSpec("cone(" + base.label() + ")", coords, box);
    const Expr r2 = Expr::pow(Expr::variable(r_name), Expr::number(2));
    c.total.set_component(0, 0, Expr::number(1));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) c.total.set_component(i + 1, j + 1, times(r2, base.component(i, j)));
    if (base.signature_hint) c.total.signature_hint = Signature{base.signature_hint->first, base.signature_hint->second + 1};
    c.total.seed = base.seed;
    c.total.provenance = "cone over " + base.label();
    return c;
}

Tensor cone_christoffel_closed(const ConeBuild& c, std::span<const double> point) {
    const int n = c.base.dim();
    const double r = point[0];
    if (!(r > 0)) throw DomainError("cone Christoffel symbols need r > 0");
    std::span<const double> x = point.subspan(1);
    Tensor base = christoffel(c.base, x);
    Eigen::MatrixXd g = metric_value(c.base, x);
    Tensor t(n + 1, 3);
    for (int i = 0; i < n; ++i) {
        t(i + 1, i + 1, 0) = 1 / r;
        t(i + 1, 0, i + 1) = 1 / r;
        for (int j = 0; j < n; ++j) {
            t(0, i + 1, j + 1) = -r * g(i, j);
            for (int k = 0; k < n; ++k) t(i + 1, j + 1, k + 1) = base(i, j, k);
        }
    }
    return t;
}

const char* to_string(HomVerdict v) {
    switch (v) {
        case HomVerdict::Cone: return "cone";
        case HomVerdict::ConeForNegative: return "cone for -g";
        case HomVerdict::None: return "none";
    }
    return "none";
}

HomReport check_hom(const MetricSpec& m, const Expr& v, const std::vector<Point>& points) {
    const int n = m.dim();
    HomReport rep;
    rep.min_v = std::numeric_limits<double>::infinity();
    rep.max_v = -rep.min_v;
    for (const auto& p : points) {
        MetricJets mj = metric_jets(m, p, 1);
        Jet vj = v.eval_jet(p, 2, m.coords());
        Eigen::VectorXd dv(n);
        for (int i = 0; i < n; ++i) dv[i] = vj.coeff(1 + i);
        std::vector<int> alpha(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                ++alpha[i];
                ++alpha[j];
                double h = vj.partial(alpha);
                --alpha[i];
                --alpha[j];
                for (int k = 0; k < n; ++k) h -= mj.gamma[i].value()(k, j) * dv[k];
                rep.hessian_residual = std::max(rep.hessian_residual, std::fabs(h - mj.g.value()(i, j)));
            }
        const double grad = dv.dot(mj.ginv.value() * dv);
        rep.gradient_residual = std::max(rep.gradient_residual, std::fabs(grad - 2 * vj.value()));
        rep.min_v = std::min(rep.min_v, vj.value());
        rep.max_v = std::max(rep.max_v, vj.value());
        ++rep.points;
    }
    if (rep.points > 0 && rep.hessian_residual < kHomTolerance && rep.gradient_residual < kHomTolerance) {
        if (rep.min_v > 0) rep.verdict = HomVerdict::Cone;
        else if (rep.max_v < 0) rep.verdict = HomVerdict::ConeForNegative;
    }
    return rep;
}

HomReport check_hom(const MetricSpec& m, const Expr& v, int count) {
    return check_hom(m, v, sample_points(m, count));
}

ConeFactor as_factor(const ConeBuild& c) { return {c.total, c.potential()}; }

ConeFactor glue_product(const ConeFactor& a, const ConeFactor& b, const std::string& label) {
    for (const ConeFactor* f : {&a, &b}) {
        HomReport rep = check_hom(f->metric, f->potential);
        if (rep.verdict != HomVerdict::Cone)
            throw InputError("factor '" + f->metric.label() + "' does not carry a verified cone potential");
    }
    std::set<std::string> seen(a.metric.coords().begin(), a.metric.coords().end());
    for (const auto& c : b.metric.coords())
        if (seen.count(c)) throw InputError("coordinate '" + c + "' appears in both factors");
    const int na = a.metric.dim(), nb = b.metric.dim();
    std::vector<std::string> coords = a.metric.coords();
    coords.insert(coords.end(), b.metric.coords().begin(), b.metric.coords().end());
    std::vector<Interval> box = a.metric.box();
    box.insert(box.end(), b.metric.box().begin(), b.metric.box().end());
    ConeFactor out;
    out.metric = MetricSpec(label.empty() ? a.metric.label() + " x " + b.metric.label() : label, coords, box);
    for (int i = 0; i < na; ++i)
        for (int j = i; j < na; ++j) out.metric.set_component(i, j, a.metric.component(i, j));
    for (int i = 0; i < nb; ++i)
        for (int j = i; j < nb; ++j) out.metric.set_component(na + i, na + j, b.metric.component(i, j));
    if (a.metric.signature_hint && b.metric.signature_hint)
        out.metric.signature_hint = Signature{a.metric.signature_hint->first + b.metric.signature_hint->first,
                                              a.metric.signature_hint->second + b.metric.signature_hint->second};
    out.metric.seed = a.metric.seed;
    out.metric.provenance = "product of " + a.metric.label() + " and " + b.metric.label();
    out.potential = a.potential + b.potential;
    return out;
}

Eigen::MatrixXd pack_parallel(const ExtendedSolution& s, double r) {
    const auto n = s.a.rows();
    Eigen::MatrixXd A(n + 1, n + 1);
    A(0, 0) = s.mu;
    A.block(0, 1, 1, n) = -r * s.lambda.transpose();
    A.block(1, 0, n, 1) = -r * s.lambda;
    A.block(1, 1, n, n) = r * r * s.a;
    return A;
}

ExtendedSolution unpack_parallel(const Eigen::MatrixXd& A, double r) {
    const auto n = A.rows() - 1;
    ExtendedSolution s;
    s.mu = A(0, 0);
    s.lambda = -A.block(1, 0, n, 1) / r;
    s.a = A.block(1, 1, n, n) / (r * r);
    return s;
}

int extended_fiber_dim(int n) { return n * (n + 1) / 2 + n + 1; }

Eigen::VectorXd to_fiber(const ExtendedSolution& s) {
    const int n = static_cast<int>(s.a.rows());
    const int na = n * (n + 1) / 2;
    Eigen::VectorXd v(extended_fiber_dim(n));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) v[static_cast<Eigen::Index>(packed_index(n, i, j))] = s.a(i, j);
    v.segment(na, n) = s.lambda;
    v[na + n] = s.mu;
    return v;
}

ExtendedSolution from_fiber(const Eigen::VectorXd& v, int n) {
    const int na = n * (n + 1) / 2;
    if (v.size() != extended_fiber_dim(n)) throw InputError("fiber vector has the wrong length");
    ExtendedSolution s;
    s.a.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) s.a(i, j) = s.a(j, i) = v[static_cast<Eigen::Index>(packed_index(n, i, j))];
    s.lambda = v.segment(na, n);
    s.mu = v[na + n];
    return s;
}

double max_curvature(const MetricSpec& m, const std::vector<Point>& points) {
    double r = 0;
    for (const auto& p : points) r = std::max(r, riemann(m, p, 0).riemann.max_abs());
    return r;
}

}  // namespace geodeq
