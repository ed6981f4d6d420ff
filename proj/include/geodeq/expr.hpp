#pragma once

#include "geodeq/jet.hpp"

#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace geodeq {

// Immutable expression tree. Copies share nodes.
class Expr {
public:
    enum class Kind { Number, Variable, Add, Sub, Mul, Div, Neg, Pow, Call };

    Expr();  // the number 0
    static Expr number(double v);
    static Expr variable(std::string name);
    static Expr call(Elementary f, Expr arg);
    static Expr pow(Expr base, Expr exponent);

    Kind kind() const;
    double number_value() const;             // Number only
    const std::string& name() const;         // Variable only
    Elementary function() const;             // Call only
    std::span<const Expr> children() const;  // operands, left to right

    bool is_number(double v) const;
    std::string to_string() const;
    std::set<std::string> free_variables() const;

    // Truncated Taylor expansion at `point`, variables bound by position in `coords`.
    Jet eval_jet(std::span<const double> point, int order, std::span<const std::string> coords) const;
    double eval(std::span<const double> point, std::span<const std::string> coords) const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);

    struct Node;

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Grammar (precedence high to low): ^ (right associative, exponent may carry a
// sign), unary -, * /, + -. Functions: exp log sqrt sin cos abs, pow(a, b).
Expr parse_expr(std::string_view source);

}  // namespace geodeq
