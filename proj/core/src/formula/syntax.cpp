#include <charconv>
#include <cstring>
#include <set>

#include "qarena/formula.hpp"

namespace qarena::formula {

namespace {

enum class Tok { End, Ident, Number, Symbol };

struct Token {
    Tok type = Tok::End;
    std::string text;
    double value = 0.0;
    int line = 1;
    int column = 1;
};

// Multi-byte spellings accepted in addition to the ascii grammar.
struct Alias {
    const char* utf8;
    Tok type;
    const char* text;
};

constexpr Alias kAliases[] = {
    {"∃", Tok::Ident, "exists"}, {"∀", Tok::Ident, "forall"}, {"∧", Tok::Ident, "and"},
    {"∨", Tok::Ident, "or"},     {"¬", Tok::Ident, "not"},    {"⇒", Tok::Symbol, "->"},
    {"→", Tok::Symbol, "->"},    {"≤", Tok::Symbol, "<="},    {"≥", Tok::Symbol, ">="},
    {"≠", Tok::Symbol, "!="},    {"−", Tok::Symbol, "-"},     {"·", Tok::Symbol, "*"},
    {"×", Tok::Symbol, "*"},     {"∈", Tok::Symbol, ":"},     {"ε", Tok::Ident, "eps"},
    {"δ", Tok::Ident, "delta"},  {"ℝ", Tok::Ident, "R"},      {"ℕ", Tok::Ident, "Nat"},
};

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    const auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            // count columns in code points, not bytes
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
                ++col;
            }
            ++i;
        }
    };
    while (i < s.size()) {
        const char c = s[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && (is_ident_start(s[j]) || is_digit(s[j]))) ++j;
            t.type = Tok::Ident;
            t.text = std::string(s.substr(i, j - i));
            advance(j - i);
            out.push_back(std::move(t));
            continue;
        }
        if (is_digit(c)) {
            std::size_t j = i;
            while (j < s.size() && is_digit(s[j])) ++j;
            if (j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1])) {
                ++j;
                while (j < s.size() && is_digit(s[j])) ++j;
            }
            if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
                if (k < s.size() && is_digit(s[k])) {
                    while (k < s.size() && is_digit(s[k])) ++k;
                    j = k;
                }
            }
            t.type = Tok::Number;
            t.text = std::string(s.substr(i, j - i));
            std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
            advance(j - i);
            out.push_back(std::move(t));
            continue;
        }
        if (static_cast<unsigned char>(c) >= 0x80) {
            bool matched = false;
            for (const auto& a : kAliases) {
                const auto len = std::strlen(a.utf8);
                if (s.substr(i, len) == a.utf8) {
                    t.type = a.type;
                    t.text = a.text;
                    advance(len);
                    out.push_back(std::move(t));
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            throw syntax_error("unexpected character", line, col);
        }
        static constexpr const char* kTwo[] = {"<=", ">=", "!=", "->", "==", "&&", "||"};
        t.type = Tok::Symbol;
        bool two = false;
        for (const char* op : kTwo) {
            if (s.substr(i, 2) == op) {
                t.text = op;
                if (t.text == "==") t.text = "=";
                if (t.text == "&&") t.text = "&";
                if (t.text == "||") t.text = "|";
                advance(2);
                two = true;
                break;
            }
        }
        if (!two) {
            if (std::strchr("().,:+-*/^<>=&|!", c) == nullptr)
                throw syntax_error(std::string("unexpected character '") + c + "'", line, col);
            t.text = std::string(1, c);
            advance(1);
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

std::optional<Relation> relation_of(const Token& t) {
    if (t.type != Tok::Symbol) return std::nullopt;
    if (t.text == "<") return Relation::Less;
    if (t.text == "<=") return Relation::LessEq;
    if (t.text == ">") return Relation::Greater;
    if (t.text == ">=") return Relation::GreaterEq;
    if (t.text == "=") return Relation::Equal;
    if (t.text == "!=") return Relation::NotEqual;
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    Formula formula() {
        Formula f;
        while (keyword("exists") || keyword("forall")) f.prefix.push_back(quantifier());
        check_prefix(f.prefix);
        f.matrix = implication();
        if (peek().type != Tok::End) fail("unexpected '" + peek().text + "' after formula");
        return f;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }

    bool keyword(const char* kw) const {
        return peek().type == Tok::Ident && peek().text == kw;
    }
    bool symbol(const char* s) const { return peek().type == Tok::Symbol && peek().text == s; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw syntax_error(msg, peek().line, peek().column);
    }

    void expect(const char* s) {
        if (!symbol(s)) {
            const auto got = peek().type == Tok::End ? std::string("end of input") : "'" + peek().text + "'";
            fail(std::string("expected '") + s + "' but found " + got);
        }
        ++pos_;
    }

    Quantifier quantifier() {
        Quantifier q;
        q.kind = take().text == "exists" ? QuantKind::Exists : QuantKind::ForAll;
        if (peek().type != Tok::Ident || is_reserved(peek().text))
            fail("expected a variable name after quantifier");
        q.variable = take().text;
        if (symbol(":")) {
            ++pos_;
            const auto& s = peek();
            if (s.type == Tok::Ident && (s.text == "R" || s.text == "Real"))
                q.sort = Sort::Real;
            else if (s.type == Tok::Ident && (s.text == "Nat" || s.text == "N"))
                q.sort = Sort::Natural;
            else
                fail("expected sort R or Nat");
            ++pos_;
        }
        if (auto rel = relation_of(peek())) {
            ++pos_;
            q.bound = Bound{*rel, term()};
        }
        expect(".");
        return q;
    }

    void check_prefix(const std::vector<Quantifier>& prefix) const {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < prefix.size(); ++i) {
            if (!seen.insert(prefix[i].variable).second)
                throw syntax_error("variable '" + prefix[i].variable + "' is quantified twice",
                                   toks_.front().line, toks_.front().column);
            if (!prefix[i].bound) continue;
            for (const auto& v : variables_of(prefix[i].bound->term)) {
                for (std::size_t j = i; j < prefix.size(); ++j) {
                    if (prefix[j].variable == v)
                        throw syntax_error("bound of '" + prefix[i].variable +
                                               "' refers to variable '" + v +
                                               "' which is not bound before it",
                                           toks_.front().line, toks_.front().column);
                }
            }
        }
    }

    static bool is_reserved(const std::string& s) {
        return s == "exists" || s == "forall" || s == "and" || s == "or" || s == "not" ||
               s == "true" || s == "false";
    }

    PropPtr implication() {
        auto lhs = disjunction();
        if (symbol("->")) {
            ++pos_;
            return implies(std::move(lhs), implication());
        }
        return lhs;
    }

    PropPtr disjunction() {
        std::vector<PropPtr> ps{conjunction()};
        while (keyword("or") || symbol("|")) {
            ++pos_;
            ps.push_back(conjunction());
        }
        return make_or(std::move(ps));
    }

    PropPtr conjunction() {
        std::vector<PropPtr> ps{negation()};
        while (keyword("and") || symbol("&")) {
            ++pos_;
            ps.push_back(negation());
        }
        return make_and(std::move(ps));
    }

    PropPtr negation() {
        if (keyword("exists") || keyword("forall"))
            throw not_prenex_error("quantifier '" + peek().text +
                                       "' inside the matrix; only prenex formulas are accepted, "
                                       "move every quantifier to the leading prefix",
                                   peek().line, peek().column);
        if (keyword("not") || symbol("!")) {
            ++pos_;
            return make_not(negation());
        }
        if (keyword("true")) {
            ++pos_;
            return make_true();
        }
        if (keyword("false")) {
            ++pos_;
            return make_false();
        }
        if (symbol("(")) {
            // A parenthesis may open a nested proposition or an arithmetic term.
            const auto save = pos_;
            try {
                ++pos_;
                auto p = implication();
                expect(")");
                if (!relation_of(peek()) && !is_arith(peek())) return p;
            } catch (const not_prenex_error&) {
                throw;
            } catch (const syntax_error&) {
            }
            pos_ = save;
        }
        return comparison();
    }

    static bool is_arith(const Token& t) {
        return t.type == Tok::Symbol &&
               (t.text == "+" || t.text == "-" || t.text == "*" || t.text == "/" || t.text == "^");
    }

    PropPtr comparison() {
        auto lhs = term();
        auto rel = relation_of(peek());
        if (!rel) fail("expected a comparison operator");
        std::vector<PropPtr> chain;
        while (rel) {
            ++pos_;
            auto rhs = term();
            chain.push_back(compare(*rel, lhs, rhs));
            lhs = rhs;
            rel = relation_of(peek());
        }
        return make_and(std::move(chain));
    }

    TermPtr term() {
        auto lhs = product();
        while (symbol("+") || symbol("-")) {
            const auto kind = take().text == "+" ? Term::Kind::Add : Term::Kind::Sub;
            lhs = binary(kind, std::move(lhs), product());
        }
        return lhs;
    }

    TermPtr product() {
        auto lhs = signed_factor();
        while (symbol("*") || symbol("/")) {
            const auto kind = take().text == "*" ? Term::Kind::Mul : Term::Kind::Div;
            lhs = binary(kind, std::move(lhs), signed_factor());
        }
        return lhs;
    }

    TermPtr signed_factor() {
        if (symbol("-")) {
            ++pos_;
            return unary(Term::Kind::Neg, signed_factor());
        }
        return power();
    }

    TermPtr power() {
        auto base = atom();
        if (symbol("^")) {
            ++pos_;
            return binary(Term::Kind::Pow, std::move(base), signed_factor());
        }
        return base;
    }

    TermPtr atom() {
        const auto& t = peek();
        if (t.type == Tok::Number) {
            ++pos_;
            return number(t.value);
        }
        if (t.type == Tok::Ident) {
            if (is_reserved(t.text)) {
                if (t.text == "exists" || t.text == "forall")
                    throw not_prenex_error("quantifier '" + t.text +
                                               "' inside the matrix; only prenex formulas are "
                                               "accepted",
                                           t.line, t.column);
                fail("unexpected keyword '" + t.text + "'");
            }
            auto name = take().text;
            if (!symbol("(")) return variable(std::move(name));
            ++pos_;
            std::vector<TermPtr> args;
            if (!symbol(")")) {
                args.push_back(term());
                while (symbol(",")) {
                    ++pos_;
                    args.push_back(term());
                }
            }
            expect(")");
            if (name == "abs") {
                if (args.size() != 1) fail("abs takes exactly one argument");
                return unary(Term::Kind::Abs, std::move(args.front()));
            }
            return call(std::move(name), std::move(args));
        }
        if (symbol("(")) {
            ++pos_;
            auto inner = term();
            expect(")");
            return inner;
        }
        if (t.type == Tok::End) fail("unexpected end of input");
        fail("unexpected '" + t.text + "'");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// rendering

int precedence(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Add:
        case Term::Kind::Sub: return 1;
        case Term::Kind::Mul:
        case Term::Kind::Div: return 2;
        case Term::Kind::Neg: return 3;
        case Term::Kind::Pow: return 4;
        default: return 5;
    }
}

int precedence(const Prop& p) {
    switch (p.kind) {
        case Prop::Kind::Implies: return 1;
        case Prop::Kind::Or: return 2;
        case Prop::Kind::And: return 3;
        case Prop::Kind::Not: return 4;
        default: return 5;
    }
}

std::string number_text(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string display_name(const std::string& name, Style style) {
    if (style == Style::Unicode) {
        if (name == "eps") return "ε";
        if (name == "delta") return "δ";
    }
    return name;
}

std::string relation_text(Relation r, Style style) {
    const bool u = style == Style::Unicode;
    switch (r) {
        case Relation::Less: return "<";
        case Relation::LessEq: return u ? "≤" : "<=";
        case Relation::Greater: return ">";
        case Relation::GreaterEq: return u ? "≥" : ">=";
        case Relation::Equal: return "=";
        case Relation::NotEqual: return u ? "≠" : "!=";
    }
    return "?";
}

void render_term(const Term& t, Style style, std::string& out);

void render_child(const TermPtr& c, bool parens, Style style, std::string& out) {
    if (parens) out += '(';
    render_term(*c, style, out);
    if (parens) out += ')';
}

void render_term(const Term& t, Style style, std::string& out) {
    const bool u = style == Style::Unicode;
    const int p = precedence(t);
    switch (t.kind) {
        case Term::Kind::Number: out += number_text(t.value); return;
        case Term::Kind::Variable: out += display_name(t.name, style); return;
        case Term::Kind::Call:
            out += display_name(t.name, style);
            out += '(';
            for (std::size_t i = 0; i < t.args.size(); ++i) {
                if (i) out += ", ";
                render_term(*t.args[i], style, out);
            }
            out += ')';
            return;
        case Term::Kind::Abs:
            out += u ? "|" : "abs(";
            render_term(*t.args[0], style, out);
            out += u ? "|" : ")";
            return;
        case Term::Kind::Neg:
            out += u ? "−" : "-";
            render_child(t.args[0], precedence(*t.args[0]) < p, style, out);
            return;
        case Term::Kind::Pow:
            render_child(t.args[0], precedence(*t.args[0]) <= p, style, out);
            out += '^';
            render_child(t.args[1], precedence(*t.args[1]) < 3, style, out);
            return;
        default: {
            const char* op = "?";
            if (t.kind == Term::Kind::Add) op = " + ";
            if (t.kind == Term::Kind::Sub) op = u ? " − " : " - ";
            if (t.kind == Term::Kind::Mul) op = u ? "·" : " * ";
            if (t.kind == Term::Kind::Div) op = u ? "/" : " / ";
            render_child(t.args[0], precedence(*t.args[0]) < p, style, out);
            out += op;
            render_child(t.args[1], precedence(*t.args[1]) <= p, style, out);
            return;
        }
    }
}

void render_prop(const Prop& p, Style style, std::string& out);

void render_prop_child(const PropPtr& c, bool parens, Style style, std::string& out) {
    if (parens) out += '(';
    render_prop(*c, style, out);
    if (parens) out += ')';
}

void render_prop(const Prop& p, Style style, std::string& out) {
    const bool u = style == Style::Unicode;
    const int prec = precedence(p);
    switch (p.kind) {
        case Prop::Kind::True: out += u ? "⊤" : "true"; return;
        case Prop::Kind::False: out += u ? "⊥" : "false"; return;
        case Prop::Kind::Compare:
            render_term(*p.lhs, style, out);
            out += ' ';
            out += relation_text(p.rel, style);
            out += ' ';
            render_term(*p.rhs, style, out);
            return;
        case Prop::Kind::Not:
            out += u ? "¬" : "not ";
            render_prop_child(p.args[0], precedence(*p.args[0]) < prec, style, out);
            return;
        case Prop::Kind::Implies:
            render_prop_child(p.args[0], precedence(*p.args[0]) <= prec, style, out);
            out += u ? " ⇒ " : " -> ";
            render_prop_child(p.args[1], precedence(*p.args[1]) < prec, style, out);
            return;
        case Prop::Kind::And:
        case Prop::Kind::Or: {
            const char* op = p.kind == Prop::Kind::And ? (u ? " ∧ " : " and ") : (u ? " ∨ " : " or ");
            for (std::size_t i = 0; i < p.args.size(); ++i) {
                if (i) out += op;
                render_prop_child(p.args[i], precedence(*p.args[i]) <= prec, style, out);
            }
            return;
        }
    }
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).formula(); }

std::vector<Formula> parse_formula_file(std::string_view text) {
    std::vector<Formula> out;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || line[first] == '#') continue;
        try {
            out.push_back(parse_formula(line));
        } catch (const syntax_error& e) {
            throw syntax_error(e.what(), line_no, e.column());
        }
    }
    return out;
}

std::string render(const TermPtr& t, Style style) {
    std::string out;
    render_term(*t, style, out);
    return out;
}

std::string render(const PropPtr& p, Style style) {
    std::string out;
    render_prop(*p, style, out);
    return out;
}

std::string render(const Quantifier& q, Style style) {
    std::string out;
    if (style == Style::Unicode) {
        out += q.kind == QuantKind::Exists ? "∃" : "∀";
        out += display_name(q.variable, style);
        if (q.bound) {
            out += relation_text(q.bound->rel, style);
            out += render(q.bound->term, style);
        } else if (q.sort == Sort::Real) {
            out += "∈ℝ";
        } else if (q.sort == Sort::Natural) {
            out += "∈ℕ";
        }
        return out;
    }
    out += q.kind == QuantKind::Exists ? "exists " : "forall ";
    out += q.variable;
    if (q.sort == Sort::Real) out += ":R";
    if (q.sort == Sort::Natural) out += ":Nat";
    if (q.bound) {
        out += relation_text(q.bound->rel, style);
        out += render(q.bound->term, style);
    }
    out += '.';
    return out;
}

std::string render(const Formula& f, Style style) {
    std::string out;
    for (const auto& q : f.prefix) {
        out += render(q, style);
        out += ' ';
    }
    render_prop(*f.matrix, style, out);
    return out;
}

}  // namespace qarena::formula
