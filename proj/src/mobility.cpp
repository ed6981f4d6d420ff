#include "geodeq/mobility.hpp"

#include "geodeq/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace geodeq {

LinearConnectionSpec extended_connection(const MetricSpec& m, double B) {
    const int n = m.dim();
    const int na = n * (n + 1) / 2;
    const int nf = extended_fiber_dim(n);
    LinearConnectionSpec c;
    c.base = m;
    c.fiber_dim = nf;
    std::ostringstream label;
    label << "extended(" << m.label() << ", B=" << B << ")";
    c.label = label.str();
    c.coeff = [m, n, na, nf, B](std::span<const double> p, int order) {
        MetricJets mj = metric_jets(m, p, order + 1);
        MatrixJet g = mj.g.truncated(order);
        const auto& sp = mj.gamma[0].space();
        const auto lam = [na](int i) { return static_cast<Eigen::Index>(na + i); };
        const auto mu = static_cast<Eigen::Index>(na + n);
        const auto pk = [n](int i, int j) { return static_cast<Eigen::Index>(packed_index(n, std::min(i, j), std::max(i, j))); };
        std::vector<MatrixJet> out;
        for (int k = 0; k < n; ++k) {
            MatrixJet ck(sp, nf, nf);
            for (std::size_t a = 0; a < sp->size(); ++a) {
                const Eigen::MatrixXd& gam = mj.gamma[k].coeff(a);  // gam(p, i) = Γ^p_ki
                const Eigen::MatrixXd& ga = g.coeff(a);
                Eigen::MatrixXd& o = ck.coeff(a);
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        const auto row = pk(i, j);
                        for (int q = 0; q < n; ++q) {
                            o(row, pk(q, j)) -= gam(q, i);
                            o(row, pk(i, q)) -= gam(q, j);
                        }
                        o(row, lam(i)) -= ga(j, k);
                        o(row, lam(j)) -= ga(i, k);
                    }
                for (int i = 0; i < n; ++i) {
                    for (int q = 0; q < n; ++q) o(lam(i), lam(q)) -= gam(q, i);
                    o(lam(i), mu) -= ga(i, k);
                    if (a == 0) o(lam(i), pk(i, k)) -= B;
                }
                if (a == 0) o(mu, lam(k)) -= 2 * B;
            }
            out.push_back(std::move(ck));
        }
        return out;
    };
    return c;
}

MetricSpec scale_metric(const MetricSpec& m, double c) {
    if (c == 0) throw InputError("scale factor must be nonzero");
    const int n = m.dim();
    std::ostringstream label;
    label << c << "*" << m.label();
    MetricSpec out(label.str(), m.coords(), m.box());
    const Expr f = Expr::number(c);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const Expr& e = m.component(i, j);
            out.set_component(i, j, e.is_number(0) ? e : (c == 1 ? e : f * e));
        }
    if (m.signature_hint)
        out.signature_hint = c > 0 ? *m.signature_hint : Signature{m.signature_hint->second, m.signature_hint->first};
    out.seed = m.seed;
    out.provenance = m.provenance;
    return out;
}

MetricSpec rescale_to_B_minus1(const MetricSpec& m, double B) {
    if (B == 0) throw InputError("rescaling needs B != 0");
    return scale_metric(m, -B);
}

ExtendedResidual extended_residual(const MetricSpec& m, double B, std::span<const double> p,
                                   const std::vector<Jet>& fields) {
    const int n = m.dim();
    const int na = n * (n + 1) / 2;
    if (static_cast<int>(fields.size()) != extended_fiber_dim(n)) throw InputError("wrong number of fields");
    MetricJets mj = metric_jets(m, p, 1);
    const Eigen::MatrixXd& g = mj.g.value();
    auto a = [&](int i, int j) -> const Jet& { return fields[packed_index(n, std::min(i, j), std::max(i, j))]; };
    auto lam = [&](int i) -> const Jet& { return fields[na + i]; };
    const Jet& mu = fields[na + n];
    auto gam = [&](int q, int k, int i) { return mj.gamma[k].value()(q, i); };  // Γ^q_ki
    ExtendedResidual r;
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double v = a(i, j).coeff(1 + k);
                for (int q = 0; q < n; ++q) v -= gam(q, k, i) * a(q, j).value() + gam(q, k, j) * a(i, q).value();
                v -= lam(i).value() * g(j, k) + lam(j).value() * g(i, k);
                r.basic = std::max(r.basic, std::fabs(v));
            }
        for (int i = 0; i < n; ++i) {
            double v = lam(i).coeff(1 + k);
            for (int q = 0; q < n; ++q) v -= gam(q, k, i) * lam(q).value();
            v -= mu.value() * g(i, k) + B * a(i, k).value();
            r.lambda_eq = std::max(r.lambda_eq, std::fabs(v));
        }
        r.mu_eq = std::max(r.mu_eq, std::fabs(mu.coeff(1 + k) - 2 * B * lam(k).value()));
    }
    return r;
}

ExtendedResidual extended_residual(const MetricSpec& m, double B, const ExtendedFields& f,
                                   const std::vector<Point>& points) {
    const int n = m.dim();
    if (static_cast<int>(f.a.size()) != n * (n + 1) / 2 || static_cast<int>(f.lambda.size()) != n)
        throw InputError("solution fields do not match the metric dimension");
    ExtendedResidual total;
    for (const auto& p : points) {
        std::vector<Jet> jets;
        for (const auto& e : f.a) jets.push_back(e.eval_jet(p, 1, m.coords()));
        for (const auto& e : f.lambda) jets.push_back(e.eval_jet(p, 1, m.coords()));
        jets.push_back(f.mu.eval_jet(p, 1, m.coords()));
        ExtendedResidual r = extended_residual(m, B, p, jets);
        total.basic = std::max(total.basic, r.basic);
        total.lambda_eq = std::max(total.lambda_eq, r.lambda_eq);
        total.mu_eq = std::max(total.mu_eq, r.mu_eq);
    }
    return total;
}

ExtendedFields mu_family(const MetricSpec& m, const ExtendedFields& sol, double t) {
    const int n = m.dim();
    if (static_cast<int>(sol.lambda.size()) != n) throw InputError("λ does not match the metric dimension");
    ExtendedFields out;
    const Expr te = Expr::number(t);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) out.a.push_back(te * sol.lambda[i] * sol.lambda[j] + m.component(i, j));
    for (int i = 0; i < n; ++i) out.lambda.push_back(te * sol.lambda[i]);
    out.mu = te;
    ExtendedResidual r = extended_residual(m, 0, out, sample_points(m, 20));
    if (r.max() > 1e-8) {
        std::ostringstream os;
        os << "mu family fails the system, residual " << r.max();
        throw VerificationError(os.str());
    }
    return out;
}

namespace {

BSample probe_B(const MetricSpec& m, double B, const FlatSectionOptions& engine, int generic_dim,
                Eigen::VectorXd* sv_out = nullptr) {
    FlatSectionOptions o = engine;
    o.rank.gap_ratio = 0;
    FlatSectionResult r = flat_section_dim(extended_connection(m, B), o);
    BSample s;
    s.B = B;
    s.dim = r.gap < engine.rank.gap_ratio ? -1 : r.dim;
    Eigen::VectorXd sv = stacked_singular_values(r.generators.matrices, static_cast<int>(r.basis.rows()));
    const auto idx = sv.size() - generic_dim - 1;
    if (generic_dim >= 0 && idx >= 0) s.indicator = sv[idx];
    if (sv_out) *sv_out = sv;
    return s;
}

}  // namespace

BSearchResult search_B(const MetricSpec& m, const BSearchOptions& opts) {
    std::vector<double> grid{0.0};
    const double l0 = std::log10(opts.min_magnitude), l1 = std::log10(opts.max_magnitude);
    for (int i = 0; i < opts.magnitudes; ++i) {
        const double e = opts.magnitudes == 1 ? l0 : l0 + (l1 - l0) * i / (opts.magnitudes - 1);
        const double mag = std::pow(10.0, e);
        grid.push_back(mag);
        grid.push_back(-mag);
    }
    std::sort(grid.begin(), grid.end());
    BSearchResult res;
    std::vector<Eigen::VectorXd> svs;
    for (double B : grid) {
        Eigen::VectorXd sv;
        res.samples.push_back(probe_B(m, B, opts.engine, -1, &sv));
        svs.push_back(sv);
    }
    int gen = 1 << 30;
    for (const auto& s : res.samples)
        if (s.dim >= 0) gen = std::min(gen, s.dim);
    if (gen == 1 << 30) throw IndecisionError("rank cut indecisive at every candidate B");
    res.generic_dim = gen;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < res.samples.size(); ++i) {
        const auto& sv = svs[i];
        const auto idx = sv.size() - gen - 1;
        res.samples[i].indicator = idx >= 0 ? sv[idx] : 0;
        if (res.samples[i].indicator < res.samples[arg].indicator) arg = i;
    }
    // golden-section refinement between the neighbours of the grid minimum
    double lo = grid[arg == 0 ? 0 : arg - 1], hi = grid[std::min(arg + 1, grid.size() - 1)];
    auto f = [&](double B) { return probe_B(m, B, opts.engine, gen).indicator; };
    const double phi = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < opts.refine_iterations && hi - lo > 1e-15 * std::max(1.0, std::fabs(lo)); ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
    }
    BSample refined = probe_B(m, 0.5 * (lo + hi), opts.engine, gen);
    // a short decimal that does at least as well is preferred
    for (int digits = 1; digits <= 8; ++digits) {
        const double scale = std::pow(10.0, digits - 1 - std::floor(std::log10(std::fabs(refined.B) + 1e-300)));
        const double snapped = std::round(refined.B * scale) / scale;
        if (snapped == refined.B) break;
        BSample s = probe_B(m, snapped, opts.engine, gen);
        if (s.dim >= refined.dim && s.indicator <= refined.indicator) {
            refined = s;
            break;
        }
    }
    res.samples.push_back(refined);
    std::size_t best = 0;
    for (std::size_t i = 1; i < res.samples.size(); ++i) {
        const auto& s = res.samples[i];
        const auto& b = res.samples[best];
        if (s.dim > b.dim || (s.dim == b.dim && s.indicator < b.indicator)) best = i;
    }
    res.best_B = res.samples[best].B;
    res.best_dim = res.samples[best].dim;
    res.conclusive = res.best_dim > gen;
    return res;
}

MobilityReport extended_mobility(const MetricSpec& m, double B, const FlatSectionOptions& opts) {
    MobilityReport rep;
    rep.label = m.label();
    rep.route = "extended-system";
    rep.n = m.dim();
    rep.B = B;
    rep.seed = opts.seed;
    FlatSectionResult r = flat_section_dim(extended_connection(m, B), opts);
    rep.D = r.dim;
    rep.gap = r.gap;
    rep.generator_count = r.generator_count;
    rep.transport_residual = r.transport_residual;
    ExtendedSolution gsol{metric_value(m, r.point), Eigen::VectorXd::Zero(m.dim()), -B};
    rep.metric_in_span = distance_from_span(r.basis, to_fiber(gsol));
    return rep;
}

MobilityReport searched_mobility(const MetricSpec& m, const BSearchOptions& opts) {
    BSearchResult s = search_B(m, opts);
    MobilityReport rep = extended_mobility(m, s.best_B, opts.engine);
    rep.search = std::move(s);
    return rep;
}

MobilityReport cone_mobility(const MetricSpec& base, const FlatSectionOptions& opts) {
    ConeBuild c = build_cone(base);
    MobilityReport rep = cone_mobility(as_factor(c), opts);
    rep.label = base.label();
    return rep;
}

MobilityReport cone_mobility(const ConeFactor& cone, const FlatSectionOptions& opts) {
    const MetricSpec& m = cone.metric;
    HomReport hom = check_hom(m, cone.potential, sample_points(m, 20, opts.seed));
    if (hom.verdict != HomVerdict::Cone) throw InputError("'" + m.label() + "' is not a cone for the given potential");
    const int total = m.dim();
    MobilityReport rep;
    rep.label = m.label();
    rep.route = "cone-parallel";
    rep.n = total - 1;
    rep.B = -1.0;
    rep.seed = opts.seed;
    rep.max_cone_curvature = max_curvature(m, sample_points(m, 20, opts.seed));
    if (rep.max_cone_curvature < 1e-8) {
        rep.constant_curvature = true;
        rep.D = total * (total + 1) / 2;
        return rep;
    }
    FlatSectionResult r = flat_section_dim(symmetric_form_connection(m), opts);
    rep.D = r.dim;
    rep.gap = r.gap;
    rep.generator_count = r.generator_count;
    rep.transport_residual = r.transport_residual;
    rep.metric_in_span = distance_from_span(r.basis, pack_symmetric(metric_value(m, r.point)));
    HolonomyGenerators hol = infinitesimal_holonomy(tangent_connection(m), r.point, opts.derivative_order);
    const int k = invariant_covectors(hol, opts.rank).dim;
    rep.symform_check = invariant_symforms(hol, opts.rank).dim;
    rep.k = k;
    rep.ell = rep.D - k * (k + 1) / 2;
    const int n = rep.n;
    rep.bounds_ok = k <= n - 2 && *rep.ell >= 1 && *rep.ell <= (n - k + 1) / 3;
    rep.bounds_apply = rep.D >= 3;
    return rep;
}

ProjIsoReport proj_iso_report(const MobilityReport& r) {
    ProjIsoReport p;
    p.D = r.D;
    p.upper_bound = std::max(0, r.D - 1);
    p.value = p.upper_bound;
    if (r.D >= 3 && r.B && *r.B != 0) {
        p.kind = "exact";
        p.band_lo = p.band_hi = r.D - 1;
    } else if (r.D >= 3) {
        p.kind = "band";
        p.band_lo = r.D - 2;
        p.band_hi = r.D - 1;
    } else {
        p.kind = "bound-only";
        p.band_lo = 0;
        p.band_hi = p.upper_bound;
    }
    return p;
}

}  // namespace geodeq
