#include "geodeq/io.hpp"

#include "geodeq/error.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace geodeq {

namespace {

std::pair<int, int> parse_index_key(const std::string& key, int dim) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) throw InputError("component key \"" + key + "\" is not of the form \"i,j\"");
    int i = 0, j = 0;
    auto read = [&](std::string_view s, int& out) {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
    };
    const std::string_view k(key);
    if (!read(k.substr(0, comma), i) || !read(k.substr(comma + 1), j))
        throw InputError("component key \"" + key + "\" is not of the form \"i,j\"");
    if (i < 1 || j < i || j > dim)
        throw InputError("component key \"" + key + "\" must satisfy 1 <= i <= j <= dim");
    return {i - 1, j - 1};
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

Json tensor_slice(const Tensor& t, std::vector<int>& idx) {
    if (static_cast<int>(idx.size()) == t.rank()) {
        std::size_t off = 0;
        for (int i : idx) off = off * t.n() + i;
        return t.data()[off];
    }
    Json a = Json::array();
    for (int i = 0; i < t.n(); ++i) {
        idx.push_back(i);
        a.push_back(tensor_slice(t, idx));
        idx.pop_back();
    }
    return a;
}

Json signature_json(const Signature& s) { return Json{{"negative", s.first}, {"positive", s.second}}; }

template <class T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

}  // namespace

MetricSpec metric_from_json(const Json& j) {
    return guarded([&] {
        if (!j.is_object()) throw InputError("metric file must be a JSON object");
        static const std::set<std::string> known{"label",      "dim",  "coords",    "signature_hint",
                                                 "components", "sample_box", "seed", "provenance"};
        for (const auto& [k, _] : j.items())
            if (!known.count(k)) throw InputError("unknown key \"" + k + "\" in metric file");
        for (const char* k : {"dim", "coords", "components", "sample_box"})
            if (!j.contains(k)) throw InputError(std::string("metric file lacks \"") + k + "\"");
        const int dim = j.at("dim").get<int>();
        const auto coords = j.at("coords").get<std::vector<std::string>>();
        if (dim < 1) throw InputError("dim must be positive");
        if (static_cast<int>(coords.size()) != dim) throw InputError("coords has the wrong length");
        std::vector<Interval> box;
        for (const auto& b : j.at("sample_box")) {
            const auto lh = b.get<std::vector<double>>();
            if (lh.size() != 2) throw InputError("sample_box entries must be [lo, hi]");
            box.push_back({lh[0], lh[1]});
        }
        if (static_cast<int>(box.size()) != dim) throw InputError("sample_box dimension differs from dim");
        MetricSpec m(j.value("label", std::string("metric")), coords, box);
        if (!j.at("components").is_object()) throw InputError("components must be an object");
        for (const auto& [k, v] : j.at("components").items()) {
            const auto [a, b] = parse_index_key(k, dim);
            if (!v.is_string()) throw InputError("component \"" + k + "\" must be a string expression");
            m.set_component(a, b, v.get<std::string>());
        }
        if (j.contains("signature_hint")) {
            const auto& s = j.at("signature_hint");
            m.signature_hint = Signature{s.at("negative").get<int>(), s.at("positive").get<int>()};
            if (m.signature_hint->first + m.signature_hint->second != dim)
                throw InputError("signature_hint does not add up to dim");
        }
        if (j.contains("seed")) m.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("provenance")) m.provenance = j.at("provenance").get<std::string>();
        m.validate();
        return m;
    });
}

Json metric_to_json(const MetricSpec& m) {
    Json j;
    j["label"] = m.label();
    j["dim"] = m.dim();
    j["coords"] = m.coords();
    if (m.signature_hint) j["signature_hint"] = signature_json(*m.signature_hint);
    Json comps = Json::object();
    for (int i = 0; i < m.dim(); ++i)
        for (int k = i; k < m.dim(); ++k) {
            const std::string s = m.component(i, k).to_string();
            if (s != "0") comps[std::to_string(i + 1) + "," + std::to_string(k + 1)] = s;
        }
    j["components"] = comps;
    Json box = Json::array();
    for (const auto& b : m.box()) box.push_back({b.lo, b.hi});
    j["sample_box"] = box;
    j["seed"] = m.seed;
    if (!m.provenance.empty()) j["provenance"] = m.provenance;
    return j;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open \"" + path + "\"");
    std::stringstream ss;
    ss << in.rdbuf();
    return guarded([&] { return Json::parse(ss.str()); });
}

std::optional<CorpusEntry> corpus_source(const std::string& source) {
    if (source.rfind("corpus:", 0) != 0) return std::nullopt;
    std::string name = source.substr(7);
    const auto slash = name.rfind('/');
    if (slash != std::string::npos) name = name.substr(0, slash);
    return corpus_get(name);
}

MetricSpec load_metric(const std::string& source) {
    if (auto e = corpus_source(source)) {
        const auto slash = source.rfind('/');
        return e->part(slash == std::string::npos ? "metric" : source.substr(slash + 1));
    }
    return metric_from_json(read_json_file(source));
}

std::vector<Expr> field_from_json(const Json& j) {
    return guarded([&] {
        const Json& comps = j.is_object() ? j.at("components") : j;
        if (!comps.is_array()) throw InputError("vector field must be an array of expressions");
        std::vector<Expr> v;
        for (const auto& c : comps) v.push_back(parse_expr(c.get<std::string>()));
        return v;
    });
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
    return guarded([&] {
        if (!j.is_array() || j.empty()) throw InputError("matrix must be a nonempty array of rows");
        const auto n = static_cast<int>(j.size());
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i) {
            const auto row = j[i].get<std::vector<double>>();
            if (static_cast<int>(row.size()) != n) throw InputError("matrix must be square");
            for (int k = 0; k < n; ++k) m(i, k) = row[k];
        }
        return m;
    });
}

Json to_json(const Eigen::MatrixXd& m) {
    Json a = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        a.push_back(row);
    }
    return a;
}

Json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Json to_json(const Tensor& t) {
    std::vector<int> idx;
    return tensor_slice(t, idx);
}

Json to_json(const GeometryAtPoint& g) {
    Json j;
    j["point"] = g.point;
    j["signature"] = signature_json(g.signature);
    j["g"] = to_json(g.g);
    j["ginv"] = to_json(g.ginv);
    j["christoffel"] = to_json(g.gamma);
    j["riemann"] = to_json(g.riemann);
    if (g.nabla_riemann) j["nabla_riemann"] = to_json(*g.nabla_riemann);
    if (g.nabla2_riemann) j["nabla2_riemann"] = to_json(*g.nabla2_riemann);
    return j;
}

Json to_json(const HomReport& r) {
    return Json{{"verdict", to_string(r.verdict)},     {"hessian_residual", r.hessian_residual},
                {"gradient_residual", r.gradient_residual}, {"min_v", r.min_v},
                {"max_v", r.max_v},                    {"points", r.points}};
}

Json to_json(const BSearchResult& r) {
    Json s = Json::array();
    for (const auto& x : r.samples) s.push_back(Json{{"B", x.B}, {"dim", x.dim}, {"indicator", x.indicator}});
    return Json{{"best_B", r.best_B},
                {"best_dim", r.best_dim},
                {"generic_dim", r.generic_dim},
                {"conclusive", r.conclusive},
                {"samples", s}};
}

Json to_json(const MobilityReport& r) {
    Json j;
    j["label"] = r.label;
    j["route"] = r.route;
    j["n"] = r.n;
    j["D"] = r.D;
    j["B"] = optional_json(r.B);
    j["k"] = optional_json(r.k);
    j["ell"] = optional_json(r.ell);
    j["constant_curvature"] = r.constant_curvature;
    j["bounds_ok"] = optional_json(r.bounds_ok);
    j["bounds_apply"] = r.bounds_apply;
    j["seed"] = r.seed;
    j["proj_minus_hom"] = to_json(proj_iso_report(r));
    j["diagnostics"] = Json{{"gap", r.gap},
                            {"generator_count", r.generator_count},
                            {"transport_residual", r.transport_residual},
                            {"metric_in_span", r.metric_in_span},
                            {"symform_check", optional_json(r.symform_check)},
                            {"max_cone_curvature", r.max_cone_curvature}};
    if (r.search) j["search"] = to_json(*r.search);
    return j;
}

Json to_json(const ProjIsoReport& r) {
    return Json{{"kind", r.kind},       {"upper_bound", r.upper_bound}, {"value", optional_json(r.value)},
                {"band_lo", r.band_lo}, {"band_hi", r.band_hi}};
}

Json to_json(const PairReport& r) {
    return Json{{"equivalent", r.equivalent},
                {"strong", r.strong},
                {"residual_lc", r.residual_lc},
                {"residual_basic", r.residual_basic},
                {"lambda_mismatch", r.lambda_mismatch},
                {"points", r.points},
                {"phi", r.phi}};
}

Json to_json(const PairAtPoint& p) {
    return Json{{"point", p.point},
                {"phi", p.phi},
                {"dphi", to_json(p.dphi)},
                {"a", to_json(p.a)},
                {"lambda", to_json(p.lambda)},
                {"lambda_trace", to_json(p.lambda_trace)},
                {"residual_lc", p.residual_lc},
                {"residual_basic", p.residual_basic}};
}

Json to_json(const BarBReport& r) { return Json{{"mean", r.mean}, {"spread", r.spread}, {"values", r.values}}; }

Json to_json(const ProjectiveFieldReport& r) {
    Json a = Json::array();
    for (const auto& m : r.a) a.push_back(to_json(m));
    return Json{{"projective", r.projective}, {"residual", r.residual}, {"points", r.points}, {"a", a}};
}

Json to_json(const PairBlocks& pb) {
    Json blocks = Json::array();
    for (const auto& b : pb.blocks) {
        Json e{{"type", b.complex ? "complex" : "real"}, {"re", b.re}};
        if (b.complex) e["im"] = b.im;
        e["size"] = b.size;
        if (!b.complex) e["sign"] = b.sign;
        blocks.push_back(e);
    }
    return Json{{"blocks", blocks},
                {"P", to_json(pb.P)},
                {"G_form", to_json(pb.form_G())},
                {"L_form", to_json(pb.form_L())},
                {"residual_G", pb.residual_G},
                {"residual_L", pb.residual_L},
                {"signature", signature_json(signature_of(pb.form_G()))}};
}

Json to_json(const std::vector<JordanEigenvalue>& js) {
    Json a = Json::array();
    for (const auto& e : js)
        a.push_back(Json{{"re", e.re},
                         {"im", e.im},
                         {"algebraic", e.algebraic},
                         {"geometric", e.geometric},
                         {"partition", e.partition},
                         {"ranks", e.ranks}});
    return a;
}

Json to_json(const CorpusEntry& e) {
    Json j;
    j["name"] = e.name;
    j["metric"] = metric_to_json(e.metric);
    if (e.base) j["base"] = metric_to_json(*e.base);
    if (e.potential) j["potential"] = e.potential->to_string();
    if (e.partner) j["gbar"] = metric_to_json(*e.partner);
    if (e.L) {
        Json comps = Json::array();
        for (const auto& c : e.L->comps) comps.push_back(c.to_string());
        j["L"] = Json{{"up", e.L->up}, {"down", e.L->down}, {"components", comps}};
    }
    Json facts = Json::array();
    for (const auto& f : e.facts) facts.push_back(Json{{"key", f.key}, {"value", f.value}, {"source", f.source}});
    j["facts"] = facts;
    return j;
}

std::string dump(const Json& j) { return j.dump(2); }

}  // namespace geodeq
