#include "geodeq/prolong.hpp"

#include "geodeq/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace geodeq {

namespace {

std::vector<MatrixJet> christoffel_jets(const MetricSpec& m, std::span<const double> p, int order) {
    return metric_jets(m, p, order + 1).gamma;
}

}  // namespace

LinearConnectionSpec tangent_connection(const MetricSpec& m) {
    LinearConnectionSpec c;
    c.base = m;
    c.fiber_dim = m.dim();
    c.label = "tangent(" + m.label() + ")";
    c.coeff = [m](std::span<const double> p, int order) { return christoffel_jets(m, p, order); };
    return c;
}

LinearConnectionSpec covector_connection(const MetricSpec& m) {
    LinearConnectionSpec c;
    c.base = m;
    c.fiber_dim = m.dim();
    c.label = "covector(" + m.label() + ")";
    c.coeff = [m](std::span<const double> p, int order) {
        auto g = christoffel_jets(m, p, order);
        for (auto& x : g) x = -1.0 * x.transpose();
        return g;
    };
    return c;
}

LinearConnectionSpec symmetric_form_connection(const MetricSpec& m) {
    const int n = m.dim();
    const int nn = n * (n + 1) / 2;
    LinearConnectionSpec c;
    c.base = m;
    c.fiber_dim = nn;
    c.label = "sym2(" + m.label() + ")";
    c.coeff = [m, n, nn](std::span<const double> p, int order) {
        auto gam = christoffel_jets(m, p, order);
        std::vector<MatrixJet> out;
        for (int k = 0; k < n; ++k) {
            MatrixJet ck(gam[k].space(), nn, nn);
            for (std::size_t a = 0; a < gam[k].space()->size(); ++a) {
                const Eigen::MatrixXd& g = gam[k].coeff(a);  // g(p, i) = Γ^p_{ki}
                Eigen::MatrixXd& out_m = ck.coeff(a);
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        const auto row = static_cast<Eigen::Index>(packed_index(n, i, j));
                        for (int q = 0; q < n; ++q) {
                            out_m(row, static_cast<Eigen::Index>(packed_index(n, q, j))) -= g(q, i);
                            out_m(row, static_cast<Eigen::Index>(packed_index(n, i, q))) -= g(q, j);
                        }
                    }
            }
            out.push_back(std::move(ck));
        }
        return out;
    };
    return c;
}

CoefficientValues coefficient_values(const LinearConnectionSpec& c) {
    auto f = c.coeff;
    return [f](std::span<const double> x) {
        auto jets = f(x, 0);
        std::vector<Eigen::MatrixXd> out;
        out.reserve(jets.size());
        for (const auto& j : jets) out.push_back(j.value());
        return out;
    };
}

std::vector<Eigen::MatrixXd> connection_curvature(const LinearConnectionSpec& c, std::span<const double> point) {
    auto f = curvature_of_coefficients(c.coeff(point, 1));
    const int n = c.base.dim();
    std::vector<Eigen::MatrixXd> out;
    for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) out.push_back(f[k * n + l].value());
    return out;
}

namespace {

// Upper triangular factor of the stacked operators, compressed as rows arrive.
Eigen::MatrixXd stacked_r(const std::vector<Eigen::MatrixXd>& ops, int ncols, bool normalize) {
    Eigen::MatrixXd stack(0, ncols);
    auto compress = [&] {
        if (stack.rows() <= ncols) return;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(stack);
        stack = qr.matrixQR().topRows(ncols).triangularView<Eigen::Upper>();
    };
    for (const auto& op : ops) {
        if (op.cols() != ncols) throw InputError("operator width does not match the fiber dimension");
        const double nrm = op.norm();
        if (nrm == 0) continue;
        const Eigen::Index old = stack.rows();
        stack.conservativeResize(old + op.rows(), Eigen::NoChange);
        stack.bottomRows(op.rows()) = normalize ? Eigen::MatrixXd(op / nrm) : op;
        if (stack.rows() > 4 * ncols) compress();
    }
    compress();
    return stack;
}

}  // namespace

Eigen::VectorXd stacked_singular_values(const std::vector<Eigen::MatrixXd>& ops, int ncols) {
    Eigen::MatrixXd r = stacked_r(ops, ncols, false);
    Eigen::VectorXd sv = Eigen::VectorXd::Zero(ncols);
    if (r.rows() == 0) return sv;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
    sv.head(svd.singularValues().size()) = svd.singularValues();
    return sv;
}

KernelResult joint_kernel(const std::vector<Eigen::MatrixXd>& ops, int ncols, const RankOptions& opts) {
    KernelResult res;
    Eigen::MatrixXd stack = stacked_r(ops, ncols, true);
    if (stack.rows() == 0) {
        res.dim = ncols;
        res.basis = Eigen::MatrixXd::Identity(ncols, ncols);
        res.singular_values = Eigen::VectorXd::Zero(ncols);
        res.gap = std::numeric_limits<double>::infinity();
        return res;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack, Eigen::ComputeFullV);
    Eigen::VectorXd sv = Eigen::VectorXd::Zero(ncols);
    sv.head(svd.singularValues().size()) = svd.singularValues();
    const double thr = opts.rel_tol * sv[0];
    int rank = 0;
    while (rank < ncols && sv[rank] > thr) ++rank;
    res.singular_values = sv;
    res.dim = ncols - rank;
    res.basis = svd.matrixV().rightCols(res.dim);
    res.gap = std::numeric_limits<double>::infinity();
    if (rank > 0 && rank < ncols && sv[rank] > 0) res.gap = sv[rank - 1] / sv[rank];
    if (res.gap < opts.gap_ratio) {
        std::ostringstream os;
        os << "rank indecision: singular values " << sv[rank - 1] << " and " << sv[rank]
           << " straddle the cut (ratio " << res.gap << ")";
        throw IndecisionError(os.str());
    }
    return res;
}

namespace {

// Largest derivative scale among the coefficient jets, as an inverse length.
double inverse_length(const std::vector<MatrixJet>& c) {
    double kappa = 0;
    const auto& sp = c[0].space();
    for (const auto& ck : c)
        for (std::size_t a = 0; a < sp->size(); ++a) {
            const double v = sp->factorial(a) * ck.coeff(a).norm();
            if (v > 0) kappa = std::max(kappa, std::pow(v, 1.0 / (sp->degree(a) + 1)));
        }
    return kappa;
}

constexpr double kRoundoffLevel = 1e-9;

}  // namespace

HolonomyGenerators infinitesimal_holonomy(const LinearConnectionSpec& c, std::span<const double> point,
                                          int derivative_order) {
    if (derivative_order < 0 || derivative_order > 2) throw InputError("derivative order must be 0, 1 or 2");
    const int n = c.base.dim();
    HolonomyGenerators gen;
    gen.point.assign(point.begin(), point.end());
    auto coeff = c.coeff(point, derivative_order + 1);
    gen.inverse_length = inverse_length(coeff);
    const double kappa = gen.inverse_length;
    auto f = curvature_of_coefficients(coeff);
    std::vector<MatrixJet> level;
    for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) level.push_back(f[k * n + l]);
    std::vector<std::vector<MatrixJet>> ctrunc(derivative_order + 2);
    for (int o = 0; o <= derivative_order + 1; ++o)
        for (const auto& ck : coeff) ctrunc[o].push_back(ck.truncated(o));
    for (int j = 0; j <= derivative_order; ++j) {
        const double floor = kRoundoffLevel * std::pow(kappa, j + 2);
        for (const auto& x : level) {
            if (x.value().norm() <= floor) {
                ++gen.dropped;
                continue;
            }
            gen.matrices.push_back(x.value());
            gen.levels.push_back(j);
        }
        if (j == derivative_order) break;
        std::vector<MatrixJet> next;
        next.reserve(level.size() * n);
        for (const auto& x : level) {
            const int o = x.order() - 1;
            MatrixJet xt = x.truncated(o);
            for (int m = 0; m < n; ++m) next.push_back(x.derivative(m) + commutator(ctrunc[o][m], xt));
        }
        level = std::move(next);
    }
    return gen;
}

std::vector<Eigen::MatrixXd> HolonomyGenerators::scaled() const {
    std::vector<Eigen::MatrixXd> out;
    for (std::size_t i = 0; i < matrices.size(); ++i)
        out.push_back(matrices[i] / std::pow(inverse_length, std::max(levels[i], 0) + 2));
    return out;
}

std::vector<Eigen::MatrixXd> transported_curvature(const LinearConnectionSpec& c, const Point& q, const Point& p,
                                                   int steps_per_unit) {
    const int n = c.base.dim();
    std::vector<int> axes(n);
    for (int i = 0; i < n; ++i) axes[i] = i;
    Eigen::MatrixXd y = transport_operator(coefficient_values(c), c.fiber_dim, axis_path(q, p, axes), steps_per_unit);
    Eigen::MatrixXd yinv = y.inverse();
    std::vector<Eigen::MatrixXd> out;
    for (const auto& f : connection_curvature(c, q)) out.push_back(y * f * yinv);
    return out;
}

FlatSectionResult flat_section_dim(const LinearConnectionSpec& c, const FlatSectionOptions& opts) {
    FlatSectionResult res;
    res.point = opts.point ? *opts.point : sample_points(c.base, 1, opts.seed)[0];
    res.generators = infinitesimal_holonomy(c, res.point, opts.derivative_order);
    std::vector<Eigen::MatrixXd> ops = res.generators.matrices;
    std::vector<Eigen::MatrixXd> transported;
    if (opts.extra_points > 0) {
        const double floor = kRoundoffLevel * std::pow(res.generators.inverse_length, 2);
        for (const auto& q : sample_points(c.base, opts.extra_points, opts.seed + 1)) {
            for (auto& g : transported_curvature(c, q, res.point, opts.steps_per_unit)) {
                if (g.norm() <= floor) continue;
                transported.push_back(g / g.norm());
            }
        }
    }
    if (opts.transported_in_kernel) ops.insert(ops.end(), transported.begin(), transported.end());
    KernelResult k = joint_kernel(ops, c.fiber_dim, opts.rank);
    res.dim = k.dim;
    res.basis = k.basis;
    res.singular_values = k.singular_values;
    res.gap = k.gap;
    res.generator_count = static_cast<int>(ops.size());
    res.transported_count = static_cast<int>(transported.size());
    for (const auto& g : transported)
        for (int b = 0; b < res.basis.cols(); ++b)
            res.transport_residual = std::max(res.transport_residual, (g * res.basis.col(b)).norm());
    return res;
}

std::vector<Jet> flat_section_jet(const LinearConnectionSpec& c, std::span<const double> point,
                                  const Eigen::VectorXd& s0, int order) {
    const int n = c.base.dim();
    const int nf = c.fiber_dim;
    auto sp = JetSpace::get(n, order);
    std::vector<Eigen::VectorXd> s(sp->size(), Eigen::VectorXd::Zero(nf));
    s[0] = s0;
    if (order > 0) {
        auto coeff = c.coeff(point, order - 1);
        auto csp = coeff[0].space();
        for (std::size_t beta = 1; beta < sp->size(); ++beta) {
            auto b = sp->index(beta);
            int k = 0;
            while (b[k] == 0) ++k;
            std::vector<int> alpha(b.begin(), b.end());
            --alpha[k];
            // coefficient of x^alpha in C_k s
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(nf);
            const std::size_t apos = csp->position(alpha);
            for (const auto& pr : csp->products()) {
                if (pr.out != apos) continue;
                acc += coeff[k].coeff(pr.lhs) * s[pr.rhs];
            }
            s[beta] = -acc / static_cast<double>(alpha[k] + 1);
        }
    }
    std::vector<Jet> out;
    for (int i = 0; i < nf; ++i) {
        std::vector<double> v(sp->size());
        for (std::size_t a = 0; a < sp->size(); ++a) v[a] = s[a][i];
        out.emplace_back(sp, std::move(v));
    }
    return out;
}

KernelResult invariant_vectors(const HolonomyGenerators& gen, const RankOptions& opts) {
    const int n = static_cast<int>(gen.point.size());
    return joint_kernel(gen.matrices, n, opts);
}

KernelResult invariant_covectors(const HolonomyGenerators& gen, const RankOptions& opts) {
    const int n = static_cast<int>(gen.point.size());
    std::vector<Eigen::MatrixXd> t;
    for (const auto& x : gen.matrices) t.push_back(x.transpose());
    return joint_kernel(t, n, opts);
}

KernelResult invariant_symforms(const HolonomyGenerators& gen, const RankOptions& opts) {
    const int n = static_cast<int>(gen.point.size());
    const int nn = n * (n + 1) / 2;
    std::vector<Eigen::MatrixXd> ops;
    for (const auto& x : gen.matrices) {
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(nn, nn);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const auto row = static_cast<Eigen::Index>(packed_index(n, i, j));
                for (int p = 0; p < n; ++p) {
                    s(row, static_cast<Eigen::Index>(packed_index(n, p, j))) += x(p, i);
                    s(row, static_cast<Eigen::Index>(packed_index(n, i, p))) += x(p, j);
                }
            }
        ops.push_back(std::move(s));
    }
    return joint_kernel(ops, nn, opts);
}

Eigen::VectorXd pack_symmetric(const Eigen::MatrixXd& h) {
    const int n = static_cast<int>(h.rows());
    Eigen::VectorXd v(n * (n + 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) v[static_cast<Eigen::Index>(packed_index(n, i, j))] = h(i, j);
    return v;
}

Eigen::MatrixXd unpack_symmetric(const Eigen::VectorXd& v, int n) {
    Eigen::MatrixXd h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) h(i, j) = h(j, i) = v[static_cast<Eigen::Index>(packed_index(n, i, j))];
    return h;
}

double distance_from_span(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v) {
    const double nv = v.norm();
    if (nv == 0) return 0;
    if (basis.cols() == 0) return 1;
    Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(v);
    return (v - basis * coef).norm() / nv;
}

}  // namespace geodeq
