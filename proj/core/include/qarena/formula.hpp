#pragma once

// Prenex quantified formulas: parsing, rendering, negation and the
// quantifier scheme that a formula induces on a two-player game.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qarena::formula {

enum class QuantKind { Exists, ForAll };
enum class Sort { Unspecified, Real, Natural };
enum class Relation { Less, LessEq, Greater, GreaterEq, Equal, NotEqual };

struct Term;
struct Prop;
using TermPtr = std::shared_ptr<const Term>;
using PropPtr = std::shared_ptr<const Prop>;

/// Arithmetic term. Calls cover uninterpreted symbols such as f(x) or seq(n).
struct Term {
    enum class Kind { Number, Variable, Call, Neg, Add, Sub, Mul, Div, Pow, Abs };

    Kind kind = Kind::Number;
    double value = 0.0;         // Number
    std::string name;           // Variable, Call
    std::vector<TermPtr> args;  // operands / call arguments

    friend bool operator==(const Term& a, const Term& b);
};

/// Quantifier-free proposition. And/Or are n-ary and always kept flat.
struct Prop {
    enum class Kind { True, False, Compare, Not, And, Or, Implies };

    Kind kind = Kind::True;
    Relation rel = Relation::Less;  // Compare
    TermPtr lhs, rhs;               // Compare
    std::vector<PropPtr> args;      // Not (1), And/Or (>= 2), Implies (2)

    friend bool operator==(const Prop& a, const Prop& b);
};

/// Restriction attached to a quantified variable, read as `variable rel term`.
struct Bound {
    Relation rel = Relation::Greater;
    TermPtr term;

    friend bool operator==(const Bound& a, const Bound& b);
};

struct Quantifier {
    QuantKind kind = QuantKind::Exists;
    std::string variable;
    Sort sort = Sort::Unspecified;
    std::optional<Bound> bound;

    friend bool operator==(const Quantifier& a, const Quantifier& b);
};

struct Formula {
    std::vector<Quantifier> prefix;
    PropPtr matrix;

    friend bool operator==(const Formula& a, const Formula& b);
};

class formula_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class syntax_error : public formula_error {
public:
    syntax_error(const std::string& what, int line, int column);
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Raised for quantifiers appearing inside the matrix.
class not_prenex_error : public syntax_error {
public:
    using syntax_error::syntax_error;
};

// Construction helpers. make_and/make_or flatten nested connectives of the
// same kind and collapse single-operand lists.
TermPtr number(double v);
TermPtr variable(std::string name);
TermPtr call(std::string name, std::vector<TermPtr> args);
TermPtr unary(Term::Kind kind, TermPtr operand);
TermPtr binary(Term::Kind kind, TermPtr lhs, TermPtr rhs);

PropPtr make_true();
PropPtr make_false();
PropPtr compare(Relation rel, TermPtr lhs, TermPtr rhs);
PropPtr make_not(PropPtr p);
PropPtr make_and(std::vector<PropPtr> ps);
PropPtr make_or(std::vector<PropPtr> ps);
PropPtr implies(PropPtr a, PropPtr b);

Formula parse_formula(std::string_view text);

/// Reads one formula per non-empty line; lines starting with '#' are skipped.
std::vector<Formula> parse_formula_file(std::string_view text);

enum class Style { Unicode, Ascii };

std::string render(const Formula& f, Style style = Style::Ascii);
std::string render(const PropPtr& p, Style style = Style::Ascii);
std::string render(const TermPtr& t, Style style = Style::Ascii);
std::string render(const Quantifier& q, Style style = Style::Ascii);

struct NegateOptions {
    /// Move a leading guard `x >= M` of the innermost matrix into the bound
    /// of the innermost quantifier, e.g. `exists x. x >= M and P` becomes
    /// `exists x>=M. P`.
    bool absorb_bounds = false;
};

Formula negate(const Formula& f, NegateOptions options = {});
PropPtr negate(const PropPtr& p);

/// Normal form used for structural comparison: implications eliminated,
/// negations pushed to comparisons, `>`/`>=` reoriented to `<`/`<=`.
Formula normalize(const Formula& f);
PropPtr normalize(const PropPtr& p);

Formula absorb_bounds(const Formula& f);

/// Quantifier kinds in prefix order, e.g. "∃∀∃∀".
std::string scheme_of(const Formula& f);
std::string scheme_of(std::span<const QuantKind> kinds);

Relation complement(Relation r);  // not (a r b)  <=>  a complement(r) b
Relation converse(Relation r);    // a r b        <=>  b converse(r) a
bool holds(Relation r, double lhs, double rhs);

/// Sorted variable names occurring in a term/proposition (call names excluded).
std::vector<std::string> variables_of(const TermPtr& t);
std::vector<std::string> variables_of(const PropPtr& p);

/// Interpretation used to evaluate the quantifier-free part of a formula.
struct Valuation {
    std::function<double(const std::string&)> variable;
    std::function<double(const std::string&, std::span<const double>)> function;
};

double evaluate(const TermPtr& t, const Valuation& v);
bool evaluate(const PropPtr& p, const Valuation& v);

}  // namespace qarena::formula
