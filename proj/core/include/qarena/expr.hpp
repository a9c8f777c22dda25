#pragma once

// Single-variable real expressions: f(x), a_n, or a closed form in eps.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qarena/interval.hpp"

namespace qarena::limits {

class expr_syntax_error : public std::invalid_argument {
public:
    expr_syntax_error(const std::string& what, int column);
    int column() const noexcept { return column_; }

private:
    int column_;
};

class Expr {
public:
    enum class Kind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sqrt, Abs, Ceil, Floor };

    struct Node {
        Kind kind = Kind::Const;
        double value = 0.0;  // Const
        int exponent = 0;    // Pow
        std::vector<std::shared_ptr<const Node>> args;
    };
    using NodePtr = std::shared_ptr<const Node>;

    Expr();
    Expr(NodePtr root, std::optional<std::string> variable);

    const Node& root() const { return *root_; }
    const NodePtr& root_ptr() const { return root_; }
    /// The single free variable, if any.
    const std::optional<std::string>& variable() const { return variable_; }
    bool is_constant() const { return !variable_.has_value(); }

    /// Canonical text; parse_expr(text()) reproduces the same tree.
    std::string text() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    NodePtr root_;
    std::optional<std::string> variable_;
};

/// Same tree up to the name of the variable.
bool same_structure(const Expr& a, const Expr& b);

/// Grammar: + - * / with the usual precedence, unary minus, `^` with an
/// integer exponent, sqrt/abs/ceil/floor calls, |e| and √atom. At most one
/// distinct variable name may occur.
Expr parse_expr(std::string_view text);

/// binary64 evaluation with the variable bound to v. Throws domain_error
/// for division by zero, square roots of negatives and overflow.
double eval_point(const Expr& e, double v);

/// Outward-rounded enclosure of e over I. Throws domain_error when I
/// touches points where e is undefined.
Interval eval_interval(const Expr& e, const Interval& I);

/// Shortest decimal text that round-trips to v.
std::string format_number(double v);

}  // namespace qarena::limits
