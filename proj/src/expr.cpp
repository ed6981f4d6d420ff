#include "geodeq/expr.hpp"

#include "geodeq/error.hpp"

#include <charconv>
#include <cmath>
#include <cstring>

namespace geodeq {

struct Expr::Node {
    Kind kind;
    double value = 0;
    std::string name;
    Elementary fn = Elementary::Exp;
    std::vector<Expr> kids;
};

namespace {

std::shared_ptr<const Expr::Node> make_node(Expr::Kind k, std::vector<Expr> kids) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->kids = std::move(kids);
    return n;
}

}  // namespace

Expr::Expr() : Expr(number(0.0)) {}

Expr Expr::number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->value = v;
    return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::call(Elementary f, Expr arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->fn = f;
    n->kids = {std::move(arg)};
    return Expr(std::move(n));
}

Expr Expr::pow(Expr base, Expr exponent) { return Expr(make_node(Kind::Pow, {std::move(base), std::move(exponent)})); }

Expr operator+(const Expr& a, const Expr& b) { return Expr(make_node(Expr::Kind::Add, {a, b})); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(make_node(Expr::Kind::Sub, {a, b})); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(make_node(Expr::Kind::Mul, {a, b})); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(make_node(Expr::Kind::Div, {a, b})); }
Expr operator-(const Expr& a) { return Expr(make_node(Expr::Kind::Neg, {a})); }

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::number_value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
Elementary Expr::function() const { return node_->fn; }
std::span<const Expr> Expr::children() const { return node_->kids; }

bool Expr::is_number(double v) const { return node_->kind == Kind::Number && node_->value == v; }

// ---- printing ----

namespace {

int precedence(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        case Expr::Kind::Neg: return 3;
        case Expr::Kind::Pow: return 4;
        case Expr::Kind::Number: return e.number_value() < 0 || std::signbit(e.number_value()) ? 3 : 5;
        default: return 5;
    }
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool wrap, std::string& out) {
    if (wrap) out += '(';
    print(e, out);
    if (wrap) out += ')';
}

void print(const Expr& e, std::string& out) {
    const int p = precedence(e);
    auto kids = e.children();
    switch (e.kind()) {
        case Expr::Kind::Number: out += format_number(e.number_value()); break;
        case Expr::Kind::Variable: out += e.name(); break;
        case Expr::Kind::Call:
            out += elementary_name(e.function());
            out += '(';
            print(kids[0], out);
            out += ')';
            break;
        case Expr::Kind::Neg:
            out += '-';
            print_wrapped(kids[0], precedence(kids[0]) < 3, out);
            break;
        case Expr::Kind::Pow:
            print_wrapped(kids[0], precedence(kids[0]) < 5, out);
            out += '^';
            print_wrapped(kids[1], precedence(kids[1]) < 3, out);
            break;
        default: {
            const char* op = e.kind() == Expr::Kind::Add ? " + "
                             : e.kind() == Expr::Kind::Sub ? " - "
                             : e.kind() == Expr::Kind::Mul ? "*"
                                                           : "/";
            print_wrapped(kids[0], precedence(kids[0]) < p, out);
            out += op;
            print_wrapped(kids[1], precedence(kids[1]) <= p, out);
        }
    }
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
    if (e.kind() == Expr::Kind::Variable) out.insert(e.name());
    for (const auto& k : e.children()) collect_vars(k, out);
}

}  // namespace

std::string Expr::to_string() const {
    std::string s;
    print(*this, s);
    return s;
}

std::set<std::string> Expr::free_variables() const {
    std::set<std::string> s;
    collect_vars(*this, s);
    return s;
}

// ---- evaluation ----

namespace {

struct EvalContext {
    JetSpacePtr space;
    std::span<const double> point;
    std::span<const std::string> coords;
};

Jet eval(const Expr& e, const EvalContext& ctx);

Jet apply(const Expr& e, const EvalContext& ctx) {
    auto kids = e.children();
    switch (e.kind()) {
        case Expr::Kind::Number: return Jet::constant(ctx.space, e.number_value());
        case Expr::Kind::Variable: {
            for (std::size_t i = 0; i < ctx.coords.size(); ++i)
                if (ctx.coords[i] == e.name()) return Jet::variable(ctx.space, static_cast<int>(i), ctx.point[i]);
            throw InputError("unknown identifier '" + e.name() + "'");
        }
        case Expr::Kind::Add: return eval(kids[0], ctx) + eval(kids[1], ctx);
        case Expr::Kind::Sub: return eval(kids[0], ctx) - eval(kids[1], ctx);
        case Expr::Kind::Mul: return eval(kids[0], ctx) * eval(kids[1], ctx);
        case Expr::Kind::Neg: return -eval(kids[0], ctx);
        case Expr::Kind::Div: {
            Jet a = eval(kids[0], ctx), b = eval(kids[1], ctx);
            return a / b;
        }
        case Expr::Kind::Call: {
            Jet a = eval(kids[0], ctx);
            return compose(e.function(), a);
        }
        case Expr::Kind::Pow: {
            Jet b = eval(kids[0], ctx);
            Jet x = eval(kids[1], ctx);
            if (x.is_constant()) {
                const double p = x.value();
                if (std::isfinite(p) && std::nearbyint(p) == p && std::fabs(p) < 1e9)
                    return pow_int(b, static_cast<long>(p));
                return pow_real(b, p);
            }
            if (!(b.value() > 0)) throw DomainError("variable exponent needs a positive base");
            return compose(Elementary::Exp, x * compose(Elementary::Log, b));
        }
    }
    throw InputError("bad expression node");
}

Jet eval(const Expr& e, const EvalContext& ctx) {
    try {
        Jet r = apply(e, ctx);
        for (double c : r.coeffs())
            if (!std::isfinite(c)) throw DomainError("non-finite value");
        return r;
    } catch (const DomainError& err) {
        if (std::strstr(err.what(), " in '") != nullptr) throw;
        throw DomainError(std::string(err.what()) + " in '" + e.to_string() + "'");
    }
}

}  // namespace

Jet Expr::eval_jet(std::span<const double> point, int order, std::span<const std::string> coords) const {
    if (order < 0 || order > 4) throw InputError("jet order must be in 0..4");
    if (point.size() != coords.size()) throw InputError("point dimension does not match coordinates");
    const int nv = std::max<int>(1, static_cast<int>(coords.size()));
    EvalContext ctx{JetSpace::get(nv, order), point, coords};
    return geodeq::eval(*this, ctx);
}

double Expr::eval(std::span<const double> point, std::span<const std::string> coords) const {
    return eval_jet(point, 0, coords).value();
}

// ---- parsing ----

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Expr parse_all() {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != s_.size()) throw SyntaxError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= s_.size()) throw SyntaxError(std::string("expected '") + c + "' before end of input", pos_);
            throw SyntaxError(std::string("expected '") + c + "'", pos_);
        }
    }

    Expr parse_sum() {
        Expr e = parse_product();
        for (;;) {
            if (accept('+'))
                e = e + parse_product();
            else if (accept('-'))
                e = e - parse_product();
            else
                return e;
        }
    }

    Expr parse_product() {
        Expr e = parse_unary();
        for (;;) {
            if (accept('*'))
                e = e * parse_unary();
            else if (accept('/'))
                e = e / parse_unary();
            else
                return e;
        }
    }

    Expr parse_unary() {
        if (accept('-')) return -parse_unary();
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (accept('^')) return Expr::pow(base, parse_unary());
        return base;
    }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    Expr parse_primary() {
        skip_ws();
        if (pos_ >= s_.size()) throw SyntaxError("unexpected end of input", pos_);
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (ident_start(c)) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
            std::string name(s_.substr(start, pos_ - start));
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '(') {
                ++pos_;
                Expr arg = parse_sum();
                if (name == "pow") {
                    expect(',');
                    Expr ex = parse_sum();
                    expect(')');
                    return Expr::pow(arg, ex);
                }
                expect(')');
                static const std::pair<const char*, Elementary> table[] = {
                    {"exp", Elementary::Exp}, {"log", Elementary::Log}, {"sqrt", Elementary::Sqrt},
                    {"sin", Elementary::Sin}, {"cos", Elementary::Cos}, {"abs", Elementary::Abs}};
                for (const auto& [n, f] : table)
                    if (name == n) return Expr::call(f, arg);
                throw SyntaxError("unknown function '" + name + "'", start);
            }
            return Expr::variable(std::move(name));
        }
        throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t nd = digits();
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            nd += digits();
        }
        if (nd == 0) throw SyntaxError("malformed number", start);
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            const std::size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (digits() == 0) pos_ = save;
        }
        double v = 0;
        auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != s_.data() + pos_) throw SyntaxError("malformed number", start);
        return Expr::number(v);
    }
};

}  // namespace

Expr parse_expr(std::string_view source) { return Parser(source).parse_all(); }

}  // namespace geodeq
