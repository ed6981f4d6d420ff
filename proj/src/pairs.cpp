#include "geodeq/pairs.hpp"

#include "geodeq/error.hpp"

#include <cmath>
#include <sstream>

namespace geodeq {

namespace {

Jet trace(const MatrixJet& m) {
    Jet t = m.entry(0, 0);
    for (int i = 1; i < m.rows(); ++i) t = t + m.entry(i, i);
    return t;
}

void require_same_chart(const MetricSpec& g, const MetricSpec& gbar) {
    if (g.dim() != gbar.dim()) throw InputError("the two metrics have different dimensions");
    if (g.coords() != gbar.coords()) throw InputError("the two metrics use different coordinate names");
}

double log_det_ratio(const Eigen::MatrixXd& g, const Eigen::MatrixXd& gb) {
    if (is_degenerate(g)) throw DegenerateMetric("g is degenerate at the point");
    if (is_degenerate(gb)) throw DegenerateMetric("gbar is degenerate at the point");
    return std::log(std::fabs(gb.determinant() / g.determinant()));
}

}  // namespace

double phi_of_pair(const MetricSpec& g, const MetricSpec& gbar, std::span<const double> p) {
    require_same_chart(g, gbar);
    return log_det_ratio(metric_value(g, p), metric_value(gbar, p)) / (2.0 * (g.dim() + 1));
}

PairAtPoint analyze_pair_at(const MetricSpec& g, const MetricSpec& gbar, std::span<const double> p) {
    require_same_chart(g, gbar);
    const int n = g.dim();
    PairAtPoint pa;
    pa.point.assign(p.begin(), p.end());
    MatrixJet gj = metric_jet(g, p, 2);
    MatrixJet gbj = metric_jet(gbar, p, 2);
    pa.phi = log_det_ratio(gj.value(), gbj.value()) / (2.0 * (n + 1));
    MatrixJet ginv = gj.inverse().truncated(1);
    MatrixJet gbinv = gbj.inverse().truncated(1);

    auto sp1 = JetSpace::get(n, 1);
    std::vector<Jet> dphi;
    std::vector<double> phic(n + 1);
    phic[0] = pa.phi;
    pa.dphi.resize(n);
    for (int k = 0; k < n; ++k) {
        dphi.push_back((trace(gbinv * gbj.derivative(k)) - trace(ginv * gj.derivative(k))) *
                       Jet::constant(sp1, 1.0 / (2.0 * (n + 1))));
        pa.dphi[k] = phic[1 + k] = dphi[k].value();
    }
    const Jet e2phi = compose(Elementary::Exp, 2.0 * Jet(sp1, phic));
    MatrixJet g1 = gj.truncated(1);
    MatrixJet m = g1 * gbinv;
    MatrixJet a = e2phi * (m * g1);
    MatrixJet dcol(sp1, n, 1);
    for (int k = 0; k < n; ++k) dcol.set_entry(k, 0, dphi[k]);
    MatrixJet lam = (-1.0 * e2phi) * (m * dcol);
    const Jet tra = trace(ginv * a);

    MetricJets mj = metric_jets(g, p, 1);
    auto gam = [&](int q, int k, int i) { return mj.gamma[k].value()(q, i); };  // Γ^q_ki
    const Eigen::MatrixXd& gv = gj.value();
    const Eigen::MatrixXd& gbv = gbj.value();
    pa.a = a.value();
    pa.lambda = lam.value().col(0);
    pa.lambda_trace.resize(n);
    pa.lambda_cov.resize(n, n);
    pa.ginv = ginv.value();
    for (int k = 0; k < n; ++k) {
        pa.lambda_trace[k] = 0.5 * tra.coeff(1 + k);
        for (int i = 0; i < n; ++i) {
            double lc = lam.coeff(1 + k)(i, 0);
            for (int q = 0; q < n; ++q) lc -= gam(q, k, i) * pa.lambda[q];
            pa.lambda_cov(i, k) = lc;
            for (int j = 0; j < n; ++j) {
                double cb = gbj.coeff(1 + k)(i, j);
                double ca = a.coeff(1 + k)(i, j);
                for (int q = 0; q < n; ++q) {
                    cb -= gam(q, k, i) * gbv(q, j) + gam(q, k, j) * gbv(i, q);
                    ca -= gam(q, k, i) * pa.a(q, j) + gam(q, k, j) * pa.a(i, q);
                }
                cb -= 2 * gbv(i, j) * pa.dphi[k] + gbv(i, k) * pa.dphi[j] + gbv(j, k) * pa.dphi[i];
                ca -= pa.lambda[i] * gv(j, k) + pa.lambda[j] * gv(i, k);
                pa.residual_lc = std::max(pa.residual_lc, std::fabs(cb));
                pa.residual_basic = std::max(pa.residual_basic, std::fabs(ca));
            }
        }
    }
    return pa;
}

PairAtPoint a_lambda_of_pair(const MetricSpec& g, const MetricSpec& gbar, std::span<const double> p) {
    PairAtPoint pa = analyze_pair_at(g, gbar, p);
    const double d = (pa.lambda - pa.lambda_trace).cwiseAbs().maxCoeff();
    if (d > 1e-6) {
        std::ostringstream os;
        os << "the two formulas for lambda disagree by " << d << "; the metrics are not geodesically equivalent";
        throw VerificationError(os.str());
    }
    return pa;
}

PairReport check_geodesic_equiv(const MetricSpec& g, const MetricSpec& gbar, const std::vector<Point>& points) {
    PairReport r;
    for (const auto& p : points) {
        PairAtPoint pa = analyze_pair_at(g, gbar, p);
        r.residual_lc = std::max(r.residual_lc, pa.residual_lc);
        r.residual_basic = std::max(r.residual_basic, pa.residual_basic);
        r.lambda_mismatch = std::max(r.lambda_mismatch, (pa.lambda - pa.lambda_trace).cwiseAbs().maxCoeff());
        r.phi.push_back(pa.phi);
        ++r.points;
    }
    r.equivalent = r.points > 0 && r.residual_lc < kPairTolerance && r.residual_basic < kPairTolerance;
    r.strong = r.equivalent && r.residual_lc < kPairStrongTolerance && r.residual_basic < kPairStrongTolerance;
    return r;
}

PairReport check_geodesic_equiv(const MetricSpec& g, const MetricSpec& gbar, int count) {
    // points must be admissible for both metrics
    std::vector<Point> pts;
    for (const auto& p : sample_points(g, 4 * count))
        if (static_cast<int>(pts.size()) < count && !is_degenerate(metric_value(gbar, p))) pts.push_back(p);
    return check_geodesic_equiv(g, gbar, pts);
}

double pair_mu(const PairAtPoint& pa, double B) {
    const auto n = static_cast<double>(pa.a.rows());
    const double div = (pa.ginv.cwiseProduct(pa.lambda_cov)).sum();
    const double tra = (pa.ginv * pa.a).trace();
    return (div - B * tra) / n;
}

double bar_B(const PairAtPoint& pa, const ExtendedSolution& sol) {
    const Eigen::VectorXd up = pa.ginv * sol.lambda;
    return -std::exp(-2 * pa.phi) * (sol.mu + pa.dphi.dot(up));
}

BarBReport bar_B(const MetricSpec& g, const MetricSpec& gbar, double B, const std::vector<Point>& points) {
    BarBReport r;
    for (const auto& p : points) {
        PairAtPoint pa = a_lambda_of_pair(g, gbar, p);
        ExtendedSolution sol{pa.a, pa.lambda, pair_mu(pa, B)};
        r.values.push_back(bar_B(pa, sol));
    }
    if (r.values.empty()) return r;
    for (double v : r.values) r.mean += v;
    r.mean /= static_cast<double>(r.values.size());
    const double scale = std::max(std::fabs(r.mean), 1e-12);
    for (double v : r.values) r.spread = std::max(r.spread, std::fabs(v - r.mean) / scale);
    if (r.spread > 1e-6) {
        std::ostringstream os;
        os << "B of the second metric is not constant (relative spread " << r.spread << ")";
        throw VerificationError(os.str());
    }
    return r;
}

ProjectiveFieldReport projective_field_solution(const MetricSpec& g, const std::vector<Expr>& v,
                                                const std::vector<Point>& points) {
    const int n = g.dim();
    if (static_cast<int>(v.size()) != n) throw InputError("vector field has the wrong number of components");
    ProjectiveFieldReport r;
    for (const auto& p : points) {
        MatrixJet gj = metric_jet(g, p, 2);
        std::vector<Jet> vj;
        for (const auto& e : v) vj.push_back(e.eval_jet(p, 2, g.coords()));
        auto sp1 = JetSpace::get(n, 1);
        MatrixJet g1 = gj.truncated(1);
        MatrixJet lie(sp1, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Jet s = Jet::constant(sp1, 0.0);
                for (int q = 0; q < n; ++q) {
                    s = s + vj[q].truncated(1) * gj.derivative(q).entry(i, j);
                    s = s + g1.entry(q, j) * vj[q].derivative(i);
                    s = s + g1.entry(i, q) * vj[q].derivative(j);
                }
                lie.set_entry(i, j, s);
            }
        MatrixJet ginv = gj.inverse().truncated(1);
        const Jet tr = trace(ginv * lie) * Jet::constant(sp1, 1.0 / (n + 1));
        MatrixJet a = lie - tr * g1;
        const Jet tra = trace(ginv * a);
        Eigen::VectorXd lam(n);
        for (int k = 0; k < n; ++k) lam[k] = 0.5 * tra.coeff(1 + k);
        MetricJets mj = metric_jets(g, p, 1);
        const Eigen::MatrixXd& gv = gj.value();
        const Eigen::MatrixXd& av = a.value();
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double c = a.coeff(1 + k)(i, j);
                    for (int q = 0; q < n; ++q)
                        c -= mj.gamma[k].value()(q, i) * av(q, j) + mj.gamma[k].value()(q, j) * av(i, q);
                    c -= lam[i] * gv(j, k) + lam[j] * gv(i, k);
                    r.residual = std::max(r.residual, std::fabs(c));
                }
        r.a.push_back(av);
        ++r.points;
    }
    r.projective = r.points > 0 && r.residual < kPairTolerance;
    return r;
}

}  // namespace geodeq
