#include "qarena/formula.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qarena::formula {

syntax_error::syntax_error(const std::string& what, int line, int column)
    : formula_error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) +
                    ")"),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------------------
// equality

namespace {

template <class T>
bool same_ptrs(const std::vector<std::shared_ptr<const T>>& a,
               const std::vector<std::shared_ptr<const T>>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) continue;
        if (!a[i] || !b[i] || !(*a[i] == *b[i])) return false;
    }
    return true;
}

bool same_term(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

}  // namespace

bool operator==(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Term::Kind::Number:
            return a.value == b.value;
        case Term::Kind::Variable:
            return a.name == b.name;
        case Term::Kind::Call:
            return a.name == b.name && same_ptrs(a.args, b.args);
        default:
            return same_ptrs(a.args, b.args);
    }
}

bool operator==(const Prop& a, const Prop& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Prop::Kind::Compare)
        return a.rel == b.rel && same_term(a.lhs, b.lhs) && same_term(a.rhs, b.rhs);
    return same_ptrs(a.args, b.args);
}

bool operator==(const Bound& a, const Bound& b) {
    return a.rel == b.rel && same_term(a.term, b.term);
}

bool operator==(const Quantifier& a, const Quantifier& b) {
    return a.kind == b.kind && a.variable == b.variable && a.sort == b.sort && a.bound == b.bound;
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.prefix != b.prefix) return false;
    if (a.matrix == b.matrix) return true;
    return a.matrix && b.matrix && *a.matrix == *b.matrix;
}

// ---------------------------------------------------------------------------
// construction

TermPtr number(double v) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Number;
    t->value = v;
    return t;
}

TermPtr variable(std::string name) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Variable;
    t->name = std::move(name);
    return t;
}

TermPtr call(std::string name, std::vector<TermPtr> args) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Call;
    t->name = std::move(name);
    t->args = std::move(args);
    return t;
}

TermPtr unary(Term::Kind kind, TermPtr operand) {
    auto t = std::make_shared<Term>();
    t->kind = kind;
    t->args.push_back(std::move(operand));
    return t;
}

TermPtr binary(Term::Kind kind, TermPtr lhs, TermPtr rhs) {
    auto t = std::make_shared<Term>();
    t->kind = kind;
    t->args = {std::move(lhs), std::move(rhs)};
    return t;
}

PropPtr make_true() {
    auto p = std::make_shared<Prop>();
    p->kind = Prop::Kind::True;
    return p;
}

PropPtr make_false() {
    auto p = std::make_shared<Prop>();
    p->kind = Prop::Kind::False;
    return p;
}

PropPtr compare(Relation rel, TermPtr lhs, TermPtr rhs) {
    auto p = std::make_shared<Prop>();
    p->kind = Prop::Kind::Compare;
    p->rel = rel;
    p->lhs = std::move(lhs);
    p->rhs = std::move(rhs);
    return p;
}

PropPtr make_not(PropPtr q) {
    auto p = std::make_shared<Prop>();
    p->kind = Prop::Kind::Not;
    p->args.push_back(std::move(q));
    return p;
}

namespace {

PropPtr make_nary(Prop::Kind kind, std::vector<PropPtr> ps) {
    std::vector<PropPtr> flat;
    for (auto& p : ps) {
        if (p->kind == kind)
            flat.insert(flat.end(), p->args.begin(), p->args.end());
        else
            flat.push_back(std::move(p));
    }
    if (flat.empty()) return kind == Prop::Kind::And ? make_true() : make_false();
    if (flat.size() == 1) return flat.front();
    auto p = std::make_shared<Prop>();
    p->kind = kind;
    p->args = std::move(flat);
    return p;
}

}  // namespace

PropPtr make_and(std::vector<PropPtr> ps) { return make_nary(Prop::Kind::And, std::move(ps)); }
PropPtr make_or(std::vector<PropPtr> ps) { return make_nary(Prop::Kind::Or, std::move(ps)); }

PropPtr implies(PropPtr a, PropPtr b) {
    auto p = std::make_shared<Prop>();
    p->kind = Prop::Kind::Implies;
    p->args = {std::move(a), std::move(b)};
    return p;
}

// ---------------------------------------------------------------------------
// relations

Relation complement(Relation r) {
    switch (r) {
        case Relation::Less: return Relation::GreaterEq;
        case Relation::LessEq: return Relation::Greater;
        case Relation::Greater: return Relation::LessEq;
        case Relation::GreaterEq: return Relation::Less;
        case Relation::Equal: return Relation::NotEqual;
        case Relation::NotEqual: return Relation::Equal;
    }
    return r;
}

Relation converse(Relation r) {
    switch (r) {
        case Relation::Less: return Relation::Greater;
        case Relation::LessEq: return Relation::GreaterEq;
        case Relation::Greater: return Relation::Less;
        case Relation::GreaterEq: return Relation::LessEq;
        default: return r;
    }
}

bool holds(Relation r, double lhs, double rhs) {
    switch (r) {
        case Relation::Less: return lhs < rhs;
        case Relation::LessEq: return lhs <= rhs;
        case Relation::Greater: return lhs > rhs;
        case Relation::GreaterEq: return lhs >= rhs;
        case Relation::Equal: return lhs == rhs;
        case Relation::NotEqual: return lhs != rhs;
    }
    return false;
}

// ---------------------------------------------------------------------------
// negation and normal form

PropPtr negate(const PropPtr& p) {
    switch (p->kind) {
        case Prop::Kind::True: return make_false();
        case Prop::Kind::False: return make_true();
        case Prop::Kind::Compare: return compare(complement(p->rel), p->lhs, p->rhs);
        case Prop::Kind::Not: return p->args.front();
        case Prop::Kind::And: {
            std::vector<PropPtr> out;
            for (const auto& a : p->args) out.push_back(negate(a));
            return make_or(std::move(out));
        }
        case Prop::Kind::Or: {
            std::vector<PropPtr> out;
            for (const auto& a : p->args) out.push_back(negate(a));
            return make_and(std::move(out));
        }
        case Prop::Kind::Implies:
            // not (A -> B)  ==  A and not B
            return make_and({p->args[0], negate(p->args[1])});
    }
    return p;
}

Formula negate(const Formula& f, NegateOptions options) {
    Formula out;
    out.prefix = f.prefix;
    for (auto& q : out.prefix)
        q.kind = q.kind == QuantKind::Exists ? QuantKind::ForAll : QuantKind::Exists;
    out.matrix = negate(f.matrix);
    if (options.absorb_bounds) return absorb_bounds(out);
    return out;
}

namespace {

PropPtr oriented(Relation rel, const TermPtr& lhs, const TermPtr& rhs) {
    if (rel == Relation::Greater || rel == Relation::GreaterEq)
        return compare(converse(rel), rhs, lhs);
    return compare(rel, lhs, rhs);
}

PropPtr nnf(const PropPtr& p, bool negated) {
    switch (p->kind) {
        case Prop::Kind::True: return negated ? make_false() : make_true();
        case Prop::Kind::False: return negated ? make_true() : make_false();
        case Prop::Kind::Compare:
            return oriented(negated ? complement(p->rel) : p->rel, p->lhs, p->rhs);
        case Prop::Kind::Not: return nnf(p->args.front(), !negated);
        case Prop::Kind::And:
        case Prop::Kind::Or: {
            std::vector<PropPtr> out;
            for (const auto& a : p->args) out.push_back(nnf(a, negated));
            const bool conj = (p->kind == Prop::Kind::And) != negated;
            return conj ? make_and(std::move(out)) : make_or(std::move(out));
        }
        case Prop::Kind::Implies:
            if (negated) return make_and({nnf(p->args[0], false), nnf(p->args[1], true)});
            return make_or({nnf(p->args[0], true), nnf(p->args[1], false)});
    }
    return p;
}

bool mentions(const TermPtr& t, const std::string& name) {
    auto vars = variables_of(t);
    return std::find(vars.begin(), vars.end(), name) != vars.end();
}

// Splits `var rel term` (or `term rel var`) into a bound on var.
std::optional<Bound> as_bound(const PropPtr& p, const std::string& var) {
    if (p->kind != Prop::Kind::Compare) return std::nullopt;
    if (p->rel == Relation::Equal || p->rel == Relation::NotEqual) return std::nullopt;
    const auto is_var = [&](const TermPtr& t) {
        return t->kind == Term::Kind::Variable && t->name == var;
    };
    if (is_var(p->lhs) && !mentions(p->rhs, var)) return Bound{p->rel, p->rhs};
    if (is_var(p->rhs) && !mentions(p->lhs, var)) return Bound{converse(p->rel), p->lhs};
    return std::nullopt;
}

}  // namespace

PropPtr normalize(const PropPtr& p) { return nnf(p, false); }

Formula normalize(const Formula& f) { return Formula{f.prefix, normalize(f.matrix)}; }

Formula absorb_bounds(const Formula& f) {
    if (f.prefix.empty() || f.prefix.back().bound) return f;
    Formula out = f;
    auto& q = out.prefix.back();
    const auto& m = f.matrix;
    if (q.kind == QuantKind::Exists && m->kind == Prop::Kind::And) {
        if (auto b = as_bound(m->args.front(), q.variable)) {
            q.bound = std::move(b);
            out.matrix = make_and(std::vector<PropPtr>(m->args.begin() + 1, m->args.end()));
        }
    } else if (q.kind == QuantKind::ForAll && m->kind == Prop::Kind::Implies) {
        if (auto b = as_bound(m->args[0], q.variable)) {
            q.bound = std::move(b);
            out.matrix = m->args[1];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// schemes

std::string scheme_of(std::span<const QuantKind> kinds) {
    std::string s;
    for (auto k : kinds) s += k == QuantKind::Exists ? "∃" : "∀";
    return s;
}

std::string scheme_of(const Formula& f) {
    std::vector<QuantKind> kinds;
    for (const auto& q : f.prefix) kinds.push_back(q.kind);
    return scheme_of(kinds);
}

// ---------------------------------------------------------------------------
// variables and evaluation

namespace {

void collect(const TermPtr& t, std::set<std::string>& out) {
    if (t->kind == Term::Kind::Variable) out.insert(t->name);
    for (const auto& a : t->args) collect(a, out);
}

void collect(const PropPtr& p, std::set<std::string>& out) {
    if (p->kind == Prop::Kind::Compare) {
        collect(p->lhs, out);
        collect(p->rhs, out);
    }
    for (const auto& a : p->args) collect(a, out);
}

}  // namespace

std::vector<std::string> variables_of(const TermPtr& t) {
    std::set<std::string> s;
    collect(t, s);
    return {s.begin(), s.end()};
}

std::vector<std::string> variables_of(const PropPtr& p) {
    std::set<std::string> s;
    collect(p, s);
    return {s.begin(), s.end()};
}

double evaluate(const TermPtr& t, const Valuation& v) {
    const auto arg = [&](std::size_t i) { return evaluate(t->args[i], v); };
    switch (t->kind) {
        case Term::Kind::Number: return t->value;
        case Term::Kind::Variable: return v.variable(t->name);
        case Term::Kind::Call: {
            std::vector<double> xs;
            for (std::size_t i = 0; i < t->args.size(); ++i) xs.push_back(arg(i));
            return v.function(t->name, xs);
        }
        case Term::Kind::Neg: return -arg(0);
        case Term::Kind::Add: return arg(0) + arg(1);
        case Term::Kind::Sub: return arg(0) - arg(1);
        case Term::Kind::Mul: return arg(0) * arg(1);
        case Term::Kind::Div: return arg(0) / arg(1);
        case Term::Kind::Pow: return std::pow(arg(0), arg(1));
        case Term::Kind::Abs: return std::fabs(arg(0));
    }
    return 0.0;
}

bool evaluate(const PropPtr& p, const Valuation& v) {
    switch (p->kind) {
        case Prop::Kind::True: return true;
        case Prop::Kind::False: return false;
        case Prop::Kind::Compare: return holds(p->rel, evaluate(p->lhs, v), evaluate(p->rhs, v));
        case Prop::Kind::Not: return !evaluate(p->args[0], v);
        case Prop::Kind::And:
            return std::all_of(p->args.begin(), p->args.end(),
                               [&](const PropPtr& a) { return evaluate(a, v); });
        case Prop::Kind::Or:
            return std::any_of(p->args.begin(), p->args.end(),
                               [&](const PropPtr& a) { return evaluate(a, v); });
        case Prop::Kind::Implies: return !evaluate(p->args[0], v) || evaluate(p->args[1], v);
    }
    return false;
}

}  // namespace qarena::formula
