#include "geodeq/corpus.hpp"

#include "geodeq/error.hpp"

#include <charconv>
#include <numeric>
#include <regex>

namespace geodeq {

namespace {

Expr num(double v) { return Expr::number(v); }
Expr var(const std::string& s) { return Expr::variable(s); }
Expr sq(const Expr& e) { return Expr::pow(e, num(2)); }

std::vector<std::string> xs(int n, const std::string& prefix = "x") {
    std::vector<std::string> c;
    for (int i = 0; i < n; ++i) c.push_back(prefix + std::to_string(i + 1));
    return c;
}

Expr sum_of_squares(const std::vector<std::string>& c) {
    Expr s = sq(var(c[0]));
    for (std::size_t i = 1; i < c.size(); ++i) s = s + sq(var(c[i]));
    return s;
}

std::string count_name(const std::string& stem, int n) { return stem + std::to_string(n); }

void require_dim(int n, int lo) {
    if (n < lo) throw InputError("dimension must be at least " + std::to_string(lo));
}

// Conformally flat metric f δ on a cube.
MetricSpec conformal(const std::string& label, int n, const Expr& f, Interval side) {
    MetricSpec m(label, xs(n), std::vector<Interval>(n, side));
    for (int i = 0; i < n; ++i) m.set_component(i, i, f);
    m.signature_hint = Signature{0, n};
    return m;
}

}  // namespace

const MetricSpec& CorpusEntry::part(const std::string& key) const {
    if (key.empty() || key == "metric" || key == "total") return metric;
    if (key == "base" && base) return *base;
    if ((key == "gbar" || key == "partner") && partner) return *partner;
    throw InputError("corpus entry '" + name + "' has no part '" + key + "'");
}

MetricSpec flat_metric(int n, int negatives) {
    require_dim(n, 1);
    if (negatives < 0 || negatives > n) throw InputError("flat metric: bad number of negative directions");
    std::string label = negatives ? "flat(" + std::to_string(n) + "," + std::to_string(negatives) + ")" : count_name("flat", n);
    MetricSpec m(label, xs(n), std::vector<Interval>(n, {-1, 1}));
    for (int i = 0; i < n; ++i) m.set_component(i, i, num(i < negatives ? -1 : 1));
    m.signature_hint = Signature{negatives, n - negatives};
    m.provenance = "flat space in affine coordinates";
    return m;
}

MetricSpec sphere_metric(int n) {
    require_dim(n, 1);
    auto c = xs(n);
    MetricSpec m = conformal(count_name("sphere", n), n, num(4) / sq(num(1) + sum_of_squares(c)), {-1, 1});
    m.provenance = "unit sphere, stereographic chart";
    return m;
}

MetricSpec hyperbolic_metric(int n) {
    require_dim(n, 1);
    auto c = xs(n);
    MetricSpec m = conformal(count_name("hyperbolic", n), n, num(4) / sq(num(1) - sum_of_squares(c)), {-0.5, 0.5});
    m.provenance = "hyperbolic space of curvature -1, Poincare ball";
    return m;
}

CorpusEntry example1() {
    CorpusEntry e;
    e.name = "example1";
    MetricSpec m("example1", xs(4), {{0.5, 2}, {0.5, 2}, {1, 3.5}, {1, 3.5}});
    m.set_component(0, 2, "x3*x4");
    m.set_component(1, 3, "x3*x4");
    m.set_component(2, 2, "x1*x4 + x2*x3");
    m.set_component(3, 3, "x1*x4 + x2*x3");
    m.signature_hint = Signature{2, 2};
    m.provenance = "nilpotent parallel endomorphism with nonzero L.R";
    e.metric = m;
    TensorField L{1, 1, std::vector<Expr>(16)};
    L.comps[0 * 4 + 2] = num(1);
    L.comps[1 * 4 + 3] = num(1);
    e.L = L;
    e.facts = {{"L parallel", "yes", "published example"},
               {"L self-adjoint", "yes", "published example"},
               {"L^1_p R^p_434 at (1,1,2,3)", "nonzero", "published example"}};
    return e;
}

CorpusEntry example2() {
    CorpusEntry e;
    e.name = "example2";
    std::vector<std::string> bc{"s", "x1", "x2", "x3", "x4"};
    MetricSpec base("example2 base", bc, {{-0.5, 0.5}, {0.5, 1.5}, {0.5, 1.5}, {1, 3}, {1, 3}});
    base.set_component(0, 0, "-1");
    base.set_component(1, 3, "exp(2*s)*x3*x4");
    base.set_component(2, 4, "exp(2*s)*x3*x4");
    base.set_component(3, 3, "exp(2*s)*(x1*x4 + x2*x3) + x3*x4");
    base.set_component(4, 4, "exp(2*s)*(x1*x4 + x2*x3) + x3*x4");
    base.signature_hint = Signature{3, 2};
    ConeBuild c = build_cone(base, "r", {0.5, 3});
    c.total.set_label("example2");
    c.total.provenance = "cone with a nilpotent parallel endomorphism and nonzero L.R";
    e.metric = c.total;
    e.base = base;
    e.potential = c.potential();
    TensorField L{1, 1, std::vector<Expr>(36)};
    const Expr w = Expr::call(Elementary::Exp, num(2) * var("s"));
    L.comps[0 * 6 + 0] = w;
    L.comps[0 * 6 + 1] = w * var("r");
    L.comps[1 * 6 + 0] = -(w / var("r"));
    L.comps[1 * 6 + 1] = -w;
    // the x block carries no e^{2s}; with that factor L is not parallel
    L.comps[2 * 6 + 4] = num(1);
    L.comps[3 * 6 + 5] = num(1);
    e.L = L;
    e.facts = {{"cone potential", "r^2/2", "published example"},
               {"L parallel", "yes, with the x block free of e^{2s}", "computed"},
               {"Jordan type of L", "nilpotent, blocks 2+2+2", "published example"}};
    return e;
}

CorpusEntry flat_projective_pair(int n) {
    require_dim(n, 2);
    CorpusEntry e;
    e.name = "flat_projective_pair(" + std::to_string(n) + ")";
    e.metric = flat_metric(n);
    std::vector<Interval> box(n, {-0.5, 0.5});
    e.metric.set_box(box);
    auto c = xs(n);
    // x -> A x / (1 + b.x)
    const double bvals[3] = {0.3, -0.2, 0.1};
    auto A = [](int m, int i) { return m == i ? 1.0 : (i == m + 1 ? 0.2 : (m == i + 1 ? 0.1 : 0.0)); };
    Expr D = num(1);
    for (int i = 0; i < n; ++i) D = D + num(bvals[i % 3]) * var(c[i]);
    std::vector<Expr> ax(n);
    for (int m = 0; m < n; ++m) {
        Expr s = num(0);
        bool first = true;
        for (int i = 0; i < n; ++i) {
            if (A(m, i) == 0) continue;
            Expr t = num(A(m, i)) * var(c[i]);
            s = first ? t : s + t;
            first = false;
        }
        ax[m] = s;
    }
    std::vector<std::vector<Expr>> J(n, std::vector<Expr>(n));
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i) J[m][i] = num(A(m, i)) / D - ax[m] * num(bvals[i % 3]) / sq(D);
    MetricSpec gb("projective image of " + e.metric.label(), c, box);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Expr s = J[0][i] * J[0][j];
            for (int m = 1; m < n; ++m) s = s + J[m][i] * J[m][j];
            gb.set_component(i, j, s);
        }
    gb.signature_hint = Signature{0, n};
    gb.provenance = "pullback of the flat metric by a projective transformation";
    e.partner = gb;
    e.facts = {{"geodesically equivalent", "yes", "closed form"}};
    return e;
}

CorpusEntry gnomonic_pair(int n) {
    require_dim(n, 2);
    CorpusEntry e;
    e.name = "gnomonic_pair(" + std::to_string(n) + ")";
    e.metric = flat_metric(n);
    auto c = xs(n);
    const Expr q = num(1) + sum_of_squares(c);
    MetricSpec gb(count_name("gnomonic_sphere", n), c, e.metric.box());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Expr t = var(c[i]) * var(c[j]) / sq(q);
            gb.set_component(i, j, i == j ? num(1) / q - t : -t);
        }
    gb.signature_hint = Signature{0, n};
    gb.provenance = "unit sphere in the central projection chart";
    e.partner = gb;
    e.facts = {{"geodesically equivalent", "yes", "closed form"}, {"B of gbar", "-1", "closed form"}};
    return e;
}

CorpusEntry realization(int n, int k, const std::vector<int>& partition) {
    if (partition.empty()) throw InputError("realization needs a nonempty partition");
    for (int ki : partition)
        if (ki < 3) throw InputError("realization: every part must be at least 3");
    if (k < 0 || std::accumulate(partition.begin(), partition.end(), 0) != n - k + 1)
        throw InputError("realization: parts must sum to n - k + 1");
    std::string name = "realization(" + std::to_string(n) + "," + std::to_string(k) + ",";
    for (std::size_t i = 0; i < partition.size(); ++i) name += (i ? "+" : "") + std::to_string(partition[i]);
    name += ")";

    std::vector<ConeFactor> factors;
    if (k > 0) {
        auto z = xs(k, "z");
        MetricSpec flat(count_name("flat", k), z, std::vector<Interval>(k, {0.5, 1.5}));
        for (int i = 0; i < k; ++i) flat.set_component(i, i, num(1));
        flat.signature_hint = Signature{0, k};
        factors.push_back({flat, sum_of_squares(z) / num(2)});
    }
    for (std::size_t f = 0; f < partition.size(); ++f) {
        const int m = partition[f] - 1;
        const std::string tag = std::to_string(f + 1);
        auto u = xs(m, "u" + tag + "_");
        MetricSpec base((f == 0 ? "lorentzian flat" : "flat") + std::to_string(m), u,
                        std::vector<Interval>(m, {-0.5, 0.5}));
        for (int i = 0; i < m; ++i) base.set_component(i, i, num(f == 0 && i == 0 ? -1 : 1));
        base.signature_hint = f == 0 ? Signature{1, m - 1} : Signature{0, m};
        factors.push_back(as_factor(build_cone(base, "rho" + tag, {0.5, 3})));
    }
    ConeFactor total = factors[0];
    for (std::size_t f = 1; f < factors.size(); ++f) total = glue_product(total, factors[f]);
    total.metric.set_label(name);
    total.metric.provenance = "product of cones glued along the sum of potentials";

    CorpusEntry e;
    e.name = name;
    e.metric = total.metric;
    e.potential = total.potential;
    const int ell = static_cast<int>(partition.size());
    e.facts = {{"k", std::to_string(k), "closed form"},
               {"l", std::to_string(ell), "closed form"},
               {"D", std::to_string(k * (k + 1) / 2 + ell), "closed form"}};
    return e;
}

namespace {

std::vector<int> parse_ints(const std::string& s, char sep) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t end = s.find(sep, pos);
        if (end == std::string::npos) end = s.size();
        int v = 0;
        const char* b = s.data() + pos;
        const char* e = s.data() + end;
        while (b < e && *b == ' ') ++b;
        while (e > b && e[-1] == ' ') --e;
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || p != e) throw InputError("bad integer '" + std::string(b, e) + "' in corpus name");
        out.push_back(v);
        pos = end + 1;
    }
    return out;
}

}  // namespace

CorpusEntry corpus_get(const std::string& spec) {
    static const std::regex re(R"(^([a-z_]*[a-z])(\d*)(?:\((.*)\))?$)");
    std::smatch mt;
    if (!std::regex_match(spec, mt, re)) throw InputError("unknown corpus entry '" + spec + "'");
    const std::string stem = mt[1];
    std::vector<int> args;
    if (mt[2].length()) args.push_back(std::stoi(mt[2]));
    std::string inner = mt[3];
    std::vector<int> partition;
    if (stem == "realization") {
        // n,k,p1+p2+...
        const auto c2 = inner.rfind(',');
        if (c2 == std::string::npos) throw InputError("realization needs (n,k,partition)");
        args = parse_ints(inner.substr(0, c2), ',');
        partition = parse_ints(inner.substr(c2 + 1), '+');
        if (args.size() != 2) throw InputError("realization needs (n,k,partition)");
        return realization(args[0], args[1], partition);
    }
    if (!inner.empty()) {
        auto more = parse_ints(inner, ',');
        args.insert(args.end(), more.begin(), more.end());
    }
    auto need = [&](std::size_t lo, std::size_t hi) {
        if (args.size() < lo || args.size() > hi) throw InputError("wrong number of parameters for '" + stem + "'");
    };
    auto simple = [&](MetricSpec m) {
        CorpusEntry e;
        e.name = spec;
        e.metric = std::move(m);
        return e;
    };
    if (stem == "flat") {
        need(1, 2);
        CorpusEntry e = simple(flat_metric(args[0], args.size() > 1 ? args[1] : 0));
        const int n = args[0];
        e.facts = {{"D", std::to_string((n + 1) * (n + 2) / 2), "closed form"}, {"B", "0", "closed form"}};
        return e;
    }
    if (stem == "sphere" || stem == "hyperbolic") {
        need(1, 1);
        const int n = args[0];
        CorpusEntry e = simple(stem == "sphere" ? sphere_metric(n) : hyperbolic_metric(n));
        e.facts = {{"D", std::to_string((n + 1) * (n + 2) / 2), "closed form"},
                   {"B", stem == "sphere" ? "-1" : "1", "computed"}};
        if (stem == "sphere") e.facts.push_back({"cone", "flat", "closed form"});
        return e;
    }
    if (stem == "example") {
        need(1, 1);
        if (args[0] == 1) return example1();
        if (args[0] == 2) return example2();
    }
    if (stem == "flat_projective_pair") {
        need(0, 1);
        return flat_projective_pair(args.empty() ? 3 : args[0]);
    }
    if (stem == "gnomonic_pair") {
        need(0, 1);
        return gnomonic_pair(args.empty() ? 3 : args[0]);
    }
    throw InputError("unknown corpus entry '" + spec + "'");
}

std::vector<std::string> corpus_names() {
    return {"flat3",
            "flat(4,1)",
            "sphere2",
            "sphere3",
            "hyperbolic3",
            "example1",
            "example2",
            "flat_projective_pair(3)",
            "gnomonic_pair(3)",
            "realization(7,0,4+4)",
            "realization(5,2,4)",
            "realization(8,0,3+3+3)",
            "realization(6,1,3+3)"};
}

}  // namespace geodeq
