#include "geodeq/metric.hpp"

#include "geodeq/error.hpp"

#include <cmath>

namespace geodeq {

std::size_t packed_index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i));
}

MetricSpec::MetricSpec(std::string label, std::vector<std::string> coords, std::vector<Interval> box)
    : label_(std::move(label)), coords_(std::move(coords)) {
    const int n = dim();
    if (n < 1) throw InputError("metric needs at least one coordinate");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coords_[i] == coords_[j]) throw InputError("duplicate coordinate name '" + coords_[i] + "'");
    comps_.assign(static_cast<std::size_t>(n * (n + 1) / 2), Expr::number(0.0));
    set_box(std::move(box));
}

void MetricSpec::set_box(std::vector<Interval> b) {
    if (static_cast<int>(b.size()) != dim()) throw InputError("sample box dimension does not match metric dimension");
    for (const auto& iv : b)
        if (!(iv.lo < iv.hi)) throw InputError("sample box interval must satisfy lo < hi");
    box_ = std::move(b);
}

const Expr& MetricSpec::component(int i, int j) const { return comps_[packed_index(dim(), i, j)]; }

void MetricSpec::set_component(int i, int j, Expr e) {
    if (i < 0 || j < 0 || i >= dim() || j >= dim()) throw InputError("component index out of range");
    comps_[packed_index(dim(), i, j)] = std::move(e);
}

void MetricSpec::set_component(int i, int j, std::string_view source) { set_component(i, j, parse_expr(source)); }

void MetricSpec::validate() const {
    for (const auto& e : comps_)
        for (const auto& v : e.free_variables()) {
            bool found = false;
            for (const auto& c : coords_) found = found || c == v;
            if (!found) throw InputError("component uses unknown identifier '" + v + "'");
        }
}

MatrixJet metric_jet(const MetricSpec& m, std::span<const double> point, int order) {
    const int n = m.dim();
    MatrixJet g(JetSpace::get(n, order), n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const Expr& e = m.component(i, j);
            if (e.is_number(0.0)) continue;
            Jet v = e.eval_jet(point, order, m.coords());
            g.set_entry(i, j, v);
            if (i != j) g.set_entry(j, i, v);
        }
    return g;
}

Eigen::MatrixXd metric_value(const MetricSpec& m, std::span<const double> point) {
    return metric_jet(m, point, 0).value();
}

Signature signature_of(const Eigen::MatrixXd& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    int neg = 0, pos = 0;
    for (int i = 0; i < ev.size(); ++i) {
        if (ev[i] < -1e-10 * scale) ++neg;
        if (ev[i] > 1e-10 * scale) ++pos;
    }
    return {neg, pos};
}

bool is_degenerate(const Eigen::MatrixXd& g) {
    if (!g.allFinite()) return true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    const auto ev = es.eigenvalues().cwiseAbs();
    const double scale = ev.maxCoeff();
    if (scale == 0) return true;
    double ratio = 1;
    for (int i = 0; i < ev.size(); ++i) ratio *= ev[i] / scale;
    return ratio < 1e-12;
}

std::vector<Point> sample_points(const MetricSpec& m, int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Point> pts;
    const int n = m.dim();
    int attempts = 0;
    while (static_cast<int>(pts.size()) < count) {
        if (++attempts > 100 * count + 1000) throw DegenerateMetric("could not find nondegenerate sample points in the box");
        Point p(n);
        for (int i = 0; i < n; ++i) p[i] = rng.uniform(m.box()[i].lo, m.box()[i].hi);
        try {
            if (is_degenerate(metric_value(m, p))) continue;
        } catch (const DomainError&) {
            continue;
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

std::vector<Point> sample_points(const MetricSpec& m, int count) { return sample_points(m, count, m.seed); }

Point box_center(const MetricSpec& m) {
    Point p(m.dim());
    for (int i = 0; i < m.dim(); ++i) p[i] = 0.5 * (m.box()[i].lo + m.box()[i].hi);
    return p;
}

}  // namespace geodeq
