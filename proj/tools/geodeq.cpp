#include "geodeq/error.hpp"
#include "geodeq/io.hpp"
#include "geodeq/verify.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>

using namespace geodeq;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitIndecision = 2;
constexpr int kExitVerification = 3;

struct Global {
    std::uint64_t seed = kDefaultSeed;
    bool seed_given = false;
};

void emit(const Json& j) { std::cout << dump(j) << "\n"; }

int fail(const std::string& kind, const std::string& message, int code) {
    std::cerr << Json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
    return code;
}

MetricSpec metric_arg(const std::string& source, const Global& g) {
    MetricSpec m = load_metric(source);
    if (g.seed_given || source.rfind("corpus:", 0) == 0) m.seed = g.seed;
    return m;
}

FlatSectionOptions engine_options(const MetricSpec& m) {
    FlatSectionOptions o;
    o.seed = m.seed;
    return o;
}

Eigen::MatrixXd matrix_arg(const std::string& path) { return matrix_from_json(read_json_file(path)); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Degree of mobility, cone holonomy and geodesic equivalence of pseudo-Riemannian metrics"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--seed", g.seed, "seed for sample points (default 42)");

    std::function<int()> action;

    // geom
    auto* geom = app.add_subcommand("geom", "pointwise geometry")->require_subcommand(1);
    std::string geom_metric;
    std::vector<double> geom_point;
    int geom_order = 0;
    auto* curv = geom->add_subcommand("curvature", "g, Γ, R and optionally ∇R, ∇²R at a point");
    curv->add_option("metric", geom_metric, "metric file or corpus:<name>")->required();
    curv->add_option("--point", geom_point, "comma separated coordinates")->delimiter(',');
    curv->add_option("--order", geom_order, "derivatives of R to include")->check(CLI::Range(0, 2));
    curv->callback([&] {
        action = [&] {
            const MetricSpec m = metric_arg(geom_metric, g);
            Point p = geom_point.empty() ? sample_points(m, 1, m.seed)[0] : Point(geom_point);
            if (static_cast<int>(p.size()) != m.dim()) throw InputError("point has the wrong number of coordinates");
            Json j = to_json(riemann(m, p, geom_order));
            j["seed"] = m.seed;
            emit(j);
            return 0;
        };
    });

    // cone
    auto* cone = app.add_subcommand("cone", "cone construction and the potential equations")->require_subcommand(1);
    std::string cone_metric, cone_v, r_name = "r";
    int cone_points = 20;
    auto* build = cone->add_subcommand("build", "the cone dr^2 + r^2 g");
    build->add_option("metric", cone_metric, "base metric")->required();
    build->add_option("--r-name", r_name, "name of the radial coordinate");
    build->callback([&] {
        action = [&] {
            const MetricSpec m = metric_arg(cone_metric, g);
            const ConeBuild c = build_cone(m, r_name);
            const HomReport h = check_hom(c.total, c.potential(), sample_points(c.total, cone_points, m.seed));
            emit(Json{{"total", metric_to_json(c.total)},
                      {"r_name", c.r_name},
                      {"potential", c.potential().to_string()},
                      {"check", to_json(h)},
                      {"seed", m.seed}});
            return 0;
        };
    });
    auto* check = cone->add_subcommand("check", "v_;ij = g_ij and |dv|^2 = 2v at sample points");
    check->add_option("metric", cone_metric, "metric file or corpus:<name>")->required();
    check->add_option("--v", cone_v, "candidate potential")->required();
    check->add_option("--points", cone_points, "number of sample points")->check(CLI::PositiveNumber);
    check->callback([&] {
        action = [&] {
            const MetricSpec m = metric_arg(cone_metric, g);
            Json j = to_json(check_hom(m, parse_expr(cone_v), sample_points(m, cone_points, m.seed)));
            j["seed"] = m.seed;
            emit(j);
            return 0;
        };
    });

    // mobility
    auto* mob = app.add_subcommand("mobility", "degree of mobility")->require_subcommand(1);
    std::string mob_metric, mob_v;
    double mob_B = 0;
    bool search = false;
    auto* degree = mob->add_subcommand("degree", "D(g) from the extended system");
    degree->add_option("metric", mob_metric, "metric file or corpus:<name>")->required();
    auto* b_opt = degree->add_option("--B", mob_B, "the constant B");
    auto* s_opt = degree->add_flag("--search-B", search, "search for B (the default without --B)");
    b_opt->excludes(s_opt);
    degree->callback([&] {
        action = [&] {
            const MetricSpec m = metric_arg(mob_metric, g);
            if (b_opt->count()) {
                emit(to_json(extended_mobility(m, mob_B, engine_options(m))));
            } else {
                BSearchOptions o;
                o.engine.seed = m.seed;
                emit(to_json(searched_mobility(m, o)));
            }
            return 0;
        };
    });
    auto* mcone = mob->add_subcommand("cone", "D(g) from parallel forms on the cone over g");
    mcone->add_option("metric", mob_metric, "base metric, or a cone when --v is given or the corpus entry is one")
        ->required();
    mcone->add_option("--v", mob_v, "treat the metric as a cone with this potential");
    mcone->callback([&] {
        action = [&] {
            const MetricSpec m = metric_arg(mob_metric, g);
            const auto entry = corpus_source(mob_metric);
            const bool whole = mob_metric.find('/') == std::string::npos;
            if (!mob_v.empty())
                emit(to_json(cone_mobility(ConeFactor{m, parse_expr(mob_v)}, engine_options(m))));
            else if (entry && entry->potential && whole)
                emit(to_json(cone_mobility(ConeFactor{m, *entry->potential}, engine_options(m))));
            else
                emit(to_json(cone_mobility(m, engine_options(m))));
            return 0;
        };
    });

    // pairs
    auto* pairs = app.add_subcommand("pairs", "geodesically equivalent pairs")->require_subcommand(1);
    std::string pg, pgbar, pfield;
    double pB = 0;
    auto* analyze = pairs->add_subcommand("analyze", "certify a pair and compute (a, λ, φ)");
    analyze->add_option("g", pg, "first metric")->required();
    analyze->add_option("gbar", pgbar, "second metric")->required();
    auto* pb_opt = analyze->add_option("--B", pB, "B of g, to report B of gbar");
    analyze->callback([&] {
        action = [&] {
            const MetricSpec m = metric_arg(pg, g);
            const MetricSpec mb = metric_arg(pgbar, g);
            const PairReport r = check_geodesic_equiv(m, mb);
            Json j = to_json(r);
            if (r.equivalent) {
                const Point p = sample_points(m, 1, m.seed)[0];
                j["at_point"] = to_json(a_lambda_of_pair(m, mb, p));
                if (pb_opt->count()) j["bar_B"] = to_json(bar_B(m, mb, pB, sample_points(m, 20, m.seed)));
            }
            j["seed"] = m.seed;
            emit(j);
            return 0;
        };
    });
    auto* proj = pairs->add_subcommand("projective", "a^v of a vector field against the basic equation");
    proj->add_option("g", pg, "metric")->required();
    proj->add_option("--field", pfield, "vector field file")->required();
    proj->callback([&] {
        action = [&] {
            const MetricSpec m = metric_arg(pg, g);
            Json j = to_json(projective_field_solution(m, field_from_json(read_json_file(pfield)),
                                                       sample_points(m, 20, m.seed)));
            j["seed"] = m.seed;
            emit(j);
            return 0;
        };
    });

    // canonical
    auto* canon = app.add_subcommand("canonical", "canonical form of a self-adjoint pair")->require_subcommand(1);
    std::string cg, cl;
    double ctol = -1;
    auto* form = canon->add_subcommand("form", "blocks J, εF and the basis P");
    form->add_option("--G", cg, "symmetric form, JSON array of rows")->required();
    form->add_option("--L", cl, "endomorphism, JSON array of rows")->required();
    form->add_option("--tol", ctol, "eigenvalue clustering tolerance (default 1e-7 |L|)");
    form->callback([&] {
        action = [&] {
            const Eigen::MatrixXd G = matrix_arg(cg);
            const Eigen::MatrixXd L = matrix_arg(cl);
            if (G.rows() != L.rows()) throw InputError("G and L have different sizes");
            Json j = to_json(canonical_pair_form(G, L, ctol));
            j["jordan"] = to_json(jordan_structure(L, ctol));
            emit(j);
            return 0;
        };
    });

    // corpus
    auto* corpus = app.add_subcommand("corpus", "built-in metrics")->require_subcommand(1);
    std::string cname, cpart = "metric";
    bool full = false;
    corpus->add_subcommand("list", "names and known facts")->callback([&] {
        action = [&] {
            Json a = Json::array();
            for (const auto& n : corpus_names()) {
                const CorpusEntry e = corpus_get(n);
                Json facts = Json::array();
                for (const auto& f : e.facts) facts.push_back(Json{{"key", f.key}, {"value", f.value}, {"source", f.source}});
                a.push_back(Json{{"name", n}, {"dim", e.metric.dim()}, {"facts", facts}});
            }
            emit(a);
            return 0;
        };
    });
    auto* exp = corpus->add_subcommand("export", "metric file of an entry");
    exp->add_option("name", cname, "e.g. sphere2, flat(4,1), realization(7,0,4+4)")->required();
    exp->add_option("--part", cpart, "metric, base or gbar");
    exp->add_flag("--full", full, "the whole entry with fields and facts");
    exp->callback([&] {
        action = [&] {
            const CorpusEntry e = corpus_get(cname);
            emit(full ? to_json(e) : metric_to_json(e.part(cpart)));
            return 0;
        };
    });

    // verify
    auto* verify = app.add_subcommand("verify", "acceptance checks")->require_subcommand(1);
    int only = 0;
    auto* all = verify->add_subcommand("all", "run every criterion; exit 0 iff all pass");
    all->add_option("--only", only, "run a single criterion")->check(CLI::Range(1, kCriterionCount));
    all->callback([&] {
        action = [&] {
            std::vector<CriterionResult> rs;
            if (only) rs.push_back(run_criterion(only));
            else rs = run_all_criteria();
            Json a = Json::array();
            bool ok = true;
            for (const auto& r : rs) {
                a.push_back(Json{{"id", r.id},
                                 {"title", r.title},
                                 {"passed", r.passed},
                                 {"seconds", r.seconds},
                                 {"detail", r.detail}});
                ok = ok && r.passed;
            }
            emit(Json{{"passed", ok}, {"criteria", a}, {"seed", kDefaultSeed}});
            return ok ? 0 : kExitVerification;
        };
    });

    try {
        app.parse(argc, argv);
        g.seed_given = app.get_option("--seed")->count() > 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), kExitInput);
    }
    try {
        return action ? action() : 0;
    } catch (const IndecisionError& e) {
        return fail(e.kind(), e.what(), kExitIndecision);
    } catch (const VerificationError& e) {
        return fail(e.kind(), e.what(), kExitVerification);
    } catch (const Error& e) {
        return fail(e.kind(), e.what(), kExitInput);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), kExitVerification);
    }
}
