#include "geodeq/geometry.hpp"

#include "geodeq/error.hpp"

#include <cmath>

namespace geodeq {

Tensor::Tensor(int n, int rank) : n_(n), rank_(rank) {
    std::size_t size = 1;
    for (int r = 0; r < rank; ++r) size *= static_cast<std::size_t>(n);
    data_.assign(size, 0.0);
}

std::size_t Tensor::offset(std::initializer_list<int> idx) const {
    std::size_t off = 0;
    for (int i : idx) off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
    return off;
}

double Tensor::max_abs() const {
    double m = 0;
    for (double v : data_) m = std::max(m, std::fabs(v));
    return m;
}

MetricJets metric_jets(const MetricSpec& m, std::span<const double> point, int order) {
    if (order < 1) throw InputError("metric jets need order >= 1");
    const int n = m.dim();
    MetricJets out;
    out.g = metric_jet(m, point, order);
    if (is_degenerate(out.g.value())) throw DegenerateMetric("metric '" + m.label() + "' is degenerate at the point");
    out.ginv = out.g.inverse();
    std::vector<MatrixJet> dg;
    dg.reserve(n);
    for (int k = 0; k < n; ++k) dg.push_back(out.g.derivative(k));
    const MatrixJet ginv = out.ginv.truncated(order - 1);
    const std::size_t sz = dg[0].space()->size();
    for (int k = 0; k < n; ++k) {
        MatrixJet first(dg[0].space(), n, n);
        for (std::size_t p = 0; p < sz; ++p) {
            Eigen::MatrixXd& f = first.coeff(p);
            for (int l = 0; l < n; ++l)
                for (int j = 0; j < n; ++j)
                    f(l, j) = 0.5 * (dg[k].coeff(p)(l, j) + dg[j].coeff(p)(l, k) - dg[l].coeff(p)(k, j));
        }
        out.gamma.push_back(ginv * first);
    }
    return out;
}

Tensor christoffel(const MetricSpec& m, std::span<const double> point) {
    const int n = m.dim();
    MetricJets mj = metric_jets(m, point, 1);
    Tensor t(n, 3);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) t(i, j, k) = mj.gamma[j].value()(i, k);
    return t;
}

std::vector<MatrixJet> curvature_of_coefficients(const std::vector<MatrixJet>& c) {
    const int n = static_cast<int>(c.size());
    const int q = c[0].order();
    if (q < 1) throw InputError("curvature needs coefficient jets of order >= 1");
    std::vector<MatrixJet> low;
    std::vector<std::vector<MatrixJet>> d(n);
    for (int k = 0; k < n; ++k) {
        low.push_back(c[k].truncated(q - 1));
        for (int l = 0; l < n; ++l) d[k].push_back(c[l].derivative(k));  // d[k][l] = ∂_k C_l
    }
    std::vector<MatrixJet> f(static_cast<std::size_t>(n * n));
    for (int k = 0; k < n; ++k) {
        f[k * n + k] = MatrixJet(low[0].space(), c[0].rows(), c[0].cols());
        for (int l = k + 1; l < n; ++l) {
            MatrixJet v = d[k][l] - d[l][k] + commutator(low[k], low[l]);
            f[l * n + k] = -1.0 * v;
            f[k * n + l] = std::move(v);
        }
    }
    return f;
}

std::vector<MatrixJet> covariant_derivative_forms(const std::vector<MatrixJet>& t, int r,
                                                  const std::vector<MatrixJet>& c,
                                                  const std::vector<MatrixJet>& gamma) {
    const int n = static_cast<int>(c.size());
    const int q = t[0].order();
    if (q < 1) throw InputError("covariant derivative needs jets of order >= 1");
    std::vector<MatrixJet> cl;
    for (const auto& ck : c) cl.push_back(ck.truncated(q - 1));
    // gam[(m * n + p) * n + a] = Γ^p_{ma}
    std::vector<Jet> gam(static_cast<std::size_t>(n * n * n));
    std::vector<char> gam_zero(gam.size());
    for (int mm = 0; mm < n; ++mm)
        for (int p = 0; p < n; ++p)
            for (int a = 0; a < n; ++a) {
                Jet j = gamma[mm].entry(p, a).truncated(q - 1);
                bool zero = true;
                for (double v : j.coeffs()) zero = zero && v == 0.0;
                gam[(mm * n + p) * n + a] = std::move(j);
                gam_zero[(mm * n + p) * n + a] = zero;
            }
    std::vector<MatrixJet> tl;
    for (const auto& x : t) tl.push_back(x.truncated(q - 1));
    std::size_t count = t.size();
    std::vector<MatrixJet> out(count * n);
    std::vector<int> idx(r);
    for (std::size_t a = 0; a < count; ++a) {
        std::size_t rem = a;
        for (int s = r - 1; s >= 0; --s) {
            idx[s] = static_cast<int>(rem % n);
            rem /= n;
        }
        for (int mm = 0; mm < n; ++mm) {
            MatrixJet v = t[a].derivative(mm) + commutator(cl[mm], tl[a]);
            for (int s = 0; s < r; ++s) {
                std::size_t stride = 1;
                for (int u = s + 1; u < r; ++u) stride *= n;
                const std::size_t base = a - static_cast<std::size_t>(idx[s]) * stride;
                for (int p = 0; p < n; ++p) {
                    const std::size_t gi = (mm * n + p) * n + idx[s];
                    if (gam_zero[gi]) continue;
                    v -= gam[gi] * tl[base + p * stride];
                }
            }
            out[a * n + mm] = std::move(v);
        }
    }
    return out;
}

GeometryAtPoint riemann(const MetricSpec& m, std::span<const double> point, int deriv_order) {
    if (deriv_order < 0 || deriv_order > 2) throw InputError("derivative order must be 0, 1 or 2");
    const int n = m.dim();
    MetricJets mj = metric_jets(m, point, 2 + deriv_order);
    GeometryAtPoint geo;
    geo.point.assign(point.begin(), point.end());
    geo.g = mj.g.value();
    geo.ginv = mj.ginv.value();
    geo.signature = signature_of(geo.g);
    geo.gamma = Tensor(n, 3);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) geo.gamma(i, j, k) = mj.gamma[j].value()(i, k);
    auto f = curvature_of_coefficients(mj.gamma);
    geo.riemann = Tensor(n, 4);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) geo.riemann(i, j, k, l) = f[k * n + l].value()(i, j);
    if (deriv_order >= 1) {
        auto df = covariant_derivative_forms(f, 2, mj.gamma, mj.gamma);
        Tensor t(n, 5);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int mm = 0; mm < n; ++mm) {
                    const auto& v = df[(k * n + l) * n + mm].value();
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) t(i, j, k, l, mm) = v(i, j);
                }
        geo.nabla_riemann = std::move(t);
        if (deriv_order == 2) {
            auto ddf = covariant_derivative_forms(df, 3, mj.gamma, mj.gamma);
            Tensor t2(n, 6);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    for (int mm = 0; mm < n; ++mm)
                        for (int pp = 0; pp < n; ++pp) {
                            const auto& v = ddf[((k * n + l) * n + mm) * n + pp].value();
                            for (int i = 0; i < n; ++i)
                                for (int j = 0; j < n; ++j) t2(i, j, k, l, mm, pp) = v(i, j);
                        }
            geo.nabla2_riemann = std::move(t2);
        }
    }
    return geo;
}

Tensor lower_first(const Tensor& r, const Eigen::MatrixXd& g) {
    const int n = r.n();
    Tensor out(n, 4);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0;
                    for (int p = 0; p < n; ++p) s += g(i, p) * r(p, j, k, l);
                    out(i, j, k, l) = s;
                }
    return out;
}

namespace {

std::size_t rank_size(int n, int rank) {
    std::size_t s = 1;
    for (int r = 0; r < rank; ++r) s *= static_cast<std::size_t>(n);
    return s;
}

}  // namespace

Tensor field_value(const MetricSpec& m, const TensorField& t, std::span<const double> point) {
    const int n = m.dim();
    const int rank = t.up + t.down;
    if (t.comps.size() != rank_size(n, rank)) throw InputError("tensor field has the wrong number of components");
    Tensor out(n, rank);
    for (std::size_t a = 0; a < t.comps.size(); ++a) out.data()[a] = t.comps[a].eval(point, m.coords());
    return out;
}

Tensor cov_deriv(const MetricSpec& m, const TensorField& t, std::span<const double> point) {
    const int n = m.dim();
    const int rank = t.up + t.down;
    const std::size_t count = rank_size(n, rank);
    if (t.comps.size() != count) throw InputError("tensor field has the wrong number of components");
    MetricJets mj = metric_jets(m, point, 1);
    std::vector<Jet> jets;
    jets.reserve(count);
    for (const auto& e : t.comps) jets.push_back(e.eval_jet(point, 1, m.coords()));
    Tensor out(n, rank + 1);
    std::vector<int> idx(rank);
    for (std::size_t a = 0; a < count; ++a) {
        std::size_t rem = a;
        for (int s = rank - 1; s >= 0; --s) {
            idx[s] = static_cast<int>(rem % n);
            rem /= n;
        }
        for (int mm = 0; mm < n; ++mm) {
            double v = jets[a].coeff(1 + mm);
            const Eigen::MatrixXd& gm = mj.gamma[mm].value();  // gm(i, j) = Γ^i_{m j}
            for (int s = 0; s < rank; ++s) {
                std::size_t stride = rank_size(n, rank - 1 - s);
                const std::size_t base = a - static_cast<std::size_t>(idx[s]) * stride;
                for (int p = 0; p < n; ++p) {
                    if (s < t.up)
                        v += gm(idx[s], p) * jets[base + p * stride].value();
                    else
                        v -= gm(p, idx[s]) * jets[base + p * stride].value();
                }
            }
            out.data()[a * n + mm] = v;
        }
    }
    return out;
}

Eigen::MatrixXd transport_operator(const CoefficientValues& c, int fiber_dim, const Path& path, int steps_per_unit) {
    Eigen::MatrixXd y = Eigen::MatrixXd::Identity(fiber_dim, fiber_dim);
    for (std::size_t s = 0; s + 1 < path.size(); ++s) {
        const Point& a = path[s];
        const Point& b = path[s + 1];
        const int n = static_cast<int>(a.size());
        Eigen::VectorXd vel(n);
        for (int i = 0; i < n; ++i) vel[i] = b[i] - a[i];
        const double len = vel.norm();
        if (len == 0) continue;
        const int steps = std::max(8, static_cast<int>(std::ceil(len * steps_per_unit)));
        const double h = 1.0 / steps;
        auto rhs = [&](double t, const Eigen::MatrixXd& yy) {
            Point x(n);
            for (int i = 0; i < n; ++i) x[i] = a[i] + t * vel[i];
            auto ck = c(x);
            Eigen::MatrixXd a_mat = Eigen::MatrixXd::Zero(fiber_dim, fiber_dim);
            for (int k = 0; k < n; ++k)
                if (vel[k] != 0) a_mat += vel[k] * ck[k];
            return Eigen::MatrixXd(-a_mat * yy);
        };
        for (int st = 0; st < steps; ++st) {
            const double t = st * h;
            Eigen::MatrixXd k1 = rhs(t, y);
            Eigen::MatrixXd k2 = rhs(t + h / 2, y + (h / 2) * k1);
            Eigen::MatrixXd k3 = rhs(t + h / 2, y + (h / 2) * k2);
            Eigen::MatrixXd k4 = rhs(t + h, y + h * k3);
            y += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        }
    }
    return y;
}

CoefficientValues tangent_coefficients(const MetricSpec& m) {
    return [m](std::span<const double> x) {
        MetricJets mj = metric_jets(m, x, 1);
        std::vector<Eigen::MatrixXd> out;
        for (const auto& g : mj.gamma) out.push_back(g.value());
        return out;
    };
}

Eigen::VectorXd parallel_transport(const MetricSpec& m, const Path& path, const Eigen::VectorXd& v,
                                   int steps_per_unit) {
    return transport_operator(tangent_coefficients(m), m.dim(), path, steps_per_unit) * v;
}

Eigen::MatrixXd parallel_transport_form(const MetricSpec& m, const Path& path, const Eigen::MatrixXd& h,
                                        int steps_per_unit) {
    Eigen::MatrixXd p = transport_operator(tangent_coefficients(m), m.dim(), path, steps_per_unit);
    Eigen::MatrixXd pinv = p.inverse();
    return pinv.transpose() * h * pinv;
}

Path axis_path(const Point& a, const Point& b, const std::vector<int>& order) {
    Path path{a};
    Point cur = a;
    for (int axis : order) {
        if (cur[axis] == b[axis]) continue;
        cur[axis] = b[axis];
        path.push_back(cur);
    }
    return path;
}

}  // namespace geodeq
