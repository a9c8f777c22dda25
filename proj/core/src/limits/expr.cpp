#include "qarena/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace qarena::limits {

expr_syntax_error::expr_syntax_error(const std::string& what, int column)
    : std::invalid_argument(what + " (column " + std::to_string(column) + ")"), column_(column) {}

namespace {

using Kind = Expr::Kind;
using NodePtr = Expr::NodePtr;

NodePtr make(Kind kind, std::vector<NodePtr> args = {}, double value = 0.0, int exponent = 0) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = kind;
    n->value = value;
    n->exponent = exponent;
    n->args = std::move(args);
    return n;
}

bool same(const Expr::Node& a, const Expr::Node& b) {
    if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
    if (a.kind == Kind::Const && a.value != b.value) return false;
    if (a.kind == Kind::Pow && a.exponent != b.exponent) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same(*a.args[i], *b.args[i])) return false;
    return true;
}

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    Expr run() {
        skip();
        if (pos_ >= s_.size()) fail("empty expression");
        auto root = sum();
        skip();
        if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return Expr(root, variable_);
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw expr_syntax_error(what, static_cast<int>(pos_) + 1);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    // Accepts an ASCII operator or one of its UTF-8 aliases.
    bool eat(std::string_view token) {
        skip();
        if (s_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }
    bool eat_minus() { return eat("-") || eat("\xE2\x88\x92"); }            // −
    bool eat_times() { return eat("*") || eat("\xC2\xB7") || eat("\xC3\x97"); }  // · ×

    NodePtr sum() {
        auto lhs = product();
        for (;;) {
            if (eat("+"))
                lhs = make(Kind::Add, {lhs, product()});
            else if (eat_minus())
                lhs = make(Kind::Sub, {lhs, product()});
            else
                return lhs;
        }
    }

    NodePtr product() {
        auto lhs = unary();
        for (;;) {
            if (eat_times())
                lhs = make(Kind::Mul, {lhs, unary()});
            else if (eat("/"))
                lhs = make(Kind::Div, {lhs, unary()});
            else
                return lhs;
        }
    }

    NodePtr unary() {
        if (eat_minus()) return make(Kind::Neg, {unary()});
        return power();
    }

    NodePtr power() {
        auto base = atom();
        if (!eat("^")) return base;
        const bool negative = eat_minus();
        skip();
        const auto start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("exponent must be an integer literal");
        int e = 0;
        const auto r = std::from_chars(s_.data() + start, s_.data() + pos_, e);
        if (r.ec != std::errc() || e > 64) fail("exponent out of range");
        return make(Kind::Pow, {base}, 0.0, negative ? -e : e);
    }

    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (eat("(")) {
            auto inner = sum();
            if (!eat(")")) fail("expected ')'");
            return inner;
        }
        if (eat("|")) {
            auto inner = sum();
            if (!eat("|")) fail("expected closing '|'");
            return make(Kind::Abs, {inner});
        }
        if (eat("\xE2\x88\x9A")) return make(Kind::Sqrt, {atom()});  // √
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const auto start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            auto p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
            if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                pos_ = p;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        double v = 0;
        const auto r = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (r.ec != std::errc() || r.ptr != s_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return make(Kind::Const, {}, v);
    }

    NodePtr identifier() {
        const auto start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string name(s_.substr(start, pos_ - start));
        static const std::pair<const char*, Kind> functions[] = {
            {"sqrt", Kind::Sqrt}, {"abs", Kind::Abs}, {"ceil", Kind::Ceil}, {"floor", Kind::Floor}};
        for (const auto& [fname, kind] : functions) {
            if (name != fname) continue;
            if (!eat("(")) fail("expected '(' after " + name);
            auto arg = sum();
            if (!eat(")")) fail("expected ')'");
            return make(kind, {arg});
        }
        if (variable_ && *variable_ != name) {
            pos_ = start;
            fail("expression uses both '" + *variable_ + "' and '" + name + "'");
        }
        variable_ = name;
        return make(Kind::Var);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::optional<std::string> variable_;
};

int precedence(const Expr::Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        default: return 5;
    }
}

std::string render(const Expr::Node& n, const std::string& var) {
    const auto wrap = [&](const NodePtr& c, int min_prec) {
        auto t = render(*c, var);
        return precedence(*c) < min_prec ? "(" + t + ")" : t;
    };
    switch (n.kind) {
        case Kind::Const: return format_number(n.value);
        case Kind::Var: return var;
        case Kind::Neg: return "-" + wrap(n.args[0], 3);
        case Kind::Add: return wrap(n.args[0], 1) + " + " + wrap(n.args[1], 2);
        case Kind::Sub: return wrap(n.args[0], 1) + " - " + wrap(n.args[1], 2);
        case Kind::Mul: return wrap(n.args[0], 2) + " * " + wrap(n.args[1], 3);
        case Kind::Div: return wrap(n.args[0], 2) + " / " + wrap(n.args[1], 3);
        case Kind::Pow: return wrap(n.args[0], 5) + "^" + std::to_string(n.exponent);
        case Kind::Sqrt: return "sqrt(" + render(*n.args[0], var) + ")";
        case Kind::Abs: return "abs(" + render(*n.args[0], var) + ")";
        case Kind::Ceil: return "ceil(" + render(*n.args[0], var) + ")";
        case Kind::Floor: return "floor(" + render(*n.args[0], var) + ")";
    }
    return {};
}

double checked(double v) {
    if (!std::isfinite(v)) throw domain_error("expression value is not finite");
    return v;
}

double point(const Expr::Node& n, double v) {
    switch (n.kind) {
        case Kind::Const: return n.value;
        case Kind::Var: return v;
        case Kind::Neg: return -point(*n.args[0], v);
        case Kind::Add: return checked(point(*n.args[0], v) + point(*n.args[1], v));
        case Kind::Sub: return checked(point(*n.args[0], v) - point(*n.args[1], v));
        case Kind::Mul: return checked(point(*n.args[0], v) * point(*n.args[1], v));
        case Kind::Div: {
            const double d = point(*n.args[1], v);
            if (d == 0.0) throw domain_error("division by zero");
            return checked(point(*n.args[0], v) / d);
        }
        case Kind::Pow: {
            const double b = point(*n.args[0], v);
            double r = 1.0;
            for (int i = 0; i < std::abs(n.exponent); ++i) r *= b;
            if (n.exponent < 0) {
                if (r == 0.0) throw domain_error("division by zero");
                r = 1.0 / r;
            }
            return checked(r);
        }
        case Kind::Sqrt: {
            const double a = point(*n.args[0], v);
            if (a < 0) throw domain_error("square root of a negative number");
            return std::sqrt(a);
        }
        case Kind::Abs: return std::fabs(point(*n.args[0], v));
        case Kind::Ceil: return std::ceil(point(*n.args[0], v));
        case Kind::Floor: return std::floor(point(*n.args[0], v));
    }
    return 0.0;
}

Interval enclose(const Expr::Node& n, const Interval& I) {
    switch (n.kind) {
        case Kind::Const: return {n.value};
        case Kind::Var: return I;
        case Kind::Neg: return -enclose(*n.args[0], I);
        case Kind::Add: return enclose(*n.args[0], I) + enclose(*n.args[1], I);
        case Kind::Sub: return enclose(*n.args[0], I) - enclose(*n.args[1], I);
        case Kind::Mul: return enclose(*n.args[0], I) * enclose(*n.args[1], I);
        case Kind::Div: return enclose(*n.args[0], I) / enclose(*n.args[1], I);
        case Kind::Pow: return pow(enclose(*n.args[0], I), n.exponent);
        case Kind::Sqrt: return sqrt(enclose(*n.args[0], I));
        case Kind::Abs: return abs(enclose(*n.args[0], I));
        case Kind::Ceil: return ceil(enclose(*n.args[0], I));
        case Kind::Floor: return floor(enclose(*n.args[0], I));
    }
    return {};
}

}  // namespace

Expr::Expr() : root_(make(Kind::Const)) {}

Expr::Expr(NodePtr root, std::optional<std::string> variable)
    : root_(std::move(root)), variable_(std::move(variable)) {}

std::string Expr::text() const { return render(*root_, variable_.value_or("x")); }

bool operator==(const Expr& a, const Expr& b) {
    return a.variable_ == b.variable_ && same(*a.root_, *b.root_);
}

bool same_structure(const Expr& a, const Expr& b) { return same(a.root(), b.root()); }

Expr parse_expr(std::string_view text) { return Parser(text).run(); }

double eval_point(const Expr& e, double v) { return point(e.root(), v); }

Interval eval_interval(const Expr& e, const Interval& I) {
    const auto r = enclose(e.root(), I);
    if (std::isinf(r.lo) || std::isinf(r.hi)) throw domain_error("enclosure is unbounded");
    return r;
}

std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace qarena::limits
