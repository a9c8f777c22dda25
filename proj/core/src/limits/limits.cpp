#include "qarena/limits.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

namespace qarena::limits {

std::string_view to_string(ProblemKind k) {
    switch (k) {
        case ProblemKind::SequenceLimit: return "sequence";
        case ProblemKind::FunctionLimitAtPoint: return "point";
        case ProblemKind::FunctionLimitAtInfinity: return "infinity";
    }
    return "point";
}

std::optional<ProblemKind> parse_problem_kind(std::string_view text) {
    if (text == "sequence") return ProblemKind::SequenceLimit;
    if (text == "point") return ProblemKind::FunctionLimitAtPoint;
    if (text == "infinity") return ProblemKind::FunctionLimitAtInfinity;
    return std::nullopt;
}

std::string_view to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::Proved: return "proved";
        case VerdictKind::Refuted: return "refuted";
        case VerdictKind::Unknown: return "unknown";
    }
    return "unknown";
}

std::string_view to_string(Basis b) { return b == Basis::Analytic ? "analytic" : "empirical"; }

namespace {

bool in_punctured(double x, double x0, double delta) { return x != x0 && std::fabs(x - x0) < delta; }

std::optional<double> try_eval(const Expr& e, double v) {
    try {
        return eval_point(e, v);
    } catch (const domain_error&) {
        return std::nullopt;
    }
}

std::optional<Witness> violation(const Expr& e, double a, double eps, double x) {
    const auto fx = try_eval(e, x);
    if (!fx) return std::nullopt;
    const double d = std::fabs(*fx - a);
    if (d >= eps) return Witness{x, *fx, d};
    return std::nullopt;
}

// Rounds a witness to the fewest decimal digits that still violate.
Witness shortest_witness(const LimitProblem& p, double eps, double delta, const Witness& w) {
    for (int digits = 0; digits <= 17; ++digits) {
        const double scale = std::pow(10.0, digits);
        double near = std::floor(w.x * scale) / scale;
        double far = std::ceil(w.x * scale) / scale;
        if (std::fabs(far - w.x) < std::fabs(near - w.x)) std::swap(near, far);
        for (double c : {near, far}) {
            if (!in_punctured(c, p.x0, delta)) continue;
            if (auto v = violation(p.expr, p.limit, eps, c)) return *v;
        }
    }
    return w;
}

void require_positive(double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

Verdict verify_delta(const LimitProblem& p, double eps, double delta, const Effort& effort) {
    if (p.kind != ProblemKind::FunctionLimitAtPoint)
        throw std::invalid_argument("verify_delta needs a limit-at-a-point problem");
    require_positive(eps, "epsilon");
    require_positive(delta, "delta");

    const double x0 = p.x0;
    const Interval target(p.limit);
    const double ulp = std::nextafter(std::fabs(x0), INFINITY) - std::fabs(x0);
    const double core_width = std::max(std::ldexp(delta, -effort.core_depth), 4096 * ulp);

    struct Box {
        Interval dom;
        int depth;
    };
    // Breadth first, so coarse violations are found before boundary slivers.
    std::deque<Box> queue{{Interval(round_down(x0 - delta), x0), 0}, {Interval(x0, round_up(x0 + delta)), 0}};

    Verdict v;
    std::optional<double> undecided;
    while (!queue.empty()) {
        const Box b = queue.front();
        queue.pop_front();
        if (++v.boxes > effort.max_boxes) {
            v.kind = VerdictKind::Unknown;
            v.certificate = {};
            v.reason = "subdivision budget of " + std::to_string(effort.max_boxes) + " boxes exhausted";
            return v;
        }
        try {
            const Interval e = eval_interval(p.expr, b.dom);
            if ((abs(e - target)).hi < eps) {
                v.certificate.pieces.push_back({b.dom, e});
                continue;
            }
        } catch (const domain_error&) {
        }

        const double m = b.dom.midpoint();
        if (in_punctured(m, x0, delta)) {
            if (!try_eval(p.expr, m)) {
                v.kind = VerdictKind::Unknown;
                v.certificate = {};
                v.reason = "f is undefined at x=" + format_number(m);
                return v;
            }
            if (auto w = violation(p.expr, p.limit, eps, m)) {
                v.kind = VerdictKind::Refuted;
                v.certificate = {};
                v.witness = shortest_witness(p, eps, delta, *w);
                v.reason = "|f(" + format_number(v.witness->x) + ") - " + format_number(p.limit) +
                           "| = " + format_number(v.witness->distance) + " >= " + format_number(eps);
                return v;
            }
        }

        if (b.dom.contains(x0) && b.dom.width() <= core_width) {
            auto& core = v.certificate.core;
            core = core ? Interval(std::min(core->lo, b.dom.lo), std::max(core->hi, b.dom.hi)) : b.dom;
            continue;
        }
        if (b.depth >= effort.max_depth || m <= b.dom.lo || m >= b.dom.hi) {
            if (!undecided) undecided = m;
            continue;
        }
        queue.push_back({Interval(b.dom.lo, m), b.depth + 1});
        queue.push_back({Interval(m, b.dom.hi), b.depth + 1});
    }

    if (undecided) {
        v.kind = VerdictKind::Unknown;
        v.certificate = {};
        v.reason = "could not separate |f(x) - a| from epsilon near x=" + format_number(*undecided);
        return v;
    }
    std::sort(v.certificate.pieces.begin(), v.certificate.pieces.end(),
              [](const CertifiedPiece& a, const CertifiedPiece& b) { return a.domain.lo < b.domain.lo; });
    v.kind = VerdictKind::Proved;
    v.reason = "certified on " + std::to_string(v.certificate.pieces.size()) + " subintervals";
    return v;
}

std::string certificate_json(const LimitProblem& p, double eps, double delta, const Verdict& v) {
    using json = nlohmann::ordered_json;
    json j;
    j["schema"] = "certificate/1";
    j["problem"] = {{"kind", to_string(p.kind)}, {"expr", p.expr.text()}, {"x0", p.x0}, {"limit", p.limit}};
    j["epsilon"] = eps;
    j["delta"] = delta;
    j["verdict"] = to_string(v.kind);
    j["reason"] = v.reason;
    j["boxes"] = v.boxes;
    j["pieces"] = json::array();
    for (const auto& piece : v.certificate.pieces) {
        j["pieces"].push_back({{"lo", piece.domain.lo},
                               {"hi", piece.domain.hi},
                               {"f_lo", piece.enclosure.lo},
                               {"f_hi", piece.enclosure.hi}});
    }
    j["core"] = v.certificate.core ? json{{"lo", v.certificate.core->lo}, {"hi", v.certificate.core->hi}} : json();
    j["witness"] = v.witness ? json{{"x", v.witness->x}, {"value", v.witness->value}, {"distance", v.witness->distance}}
                             : json();
    return j.dump(2) + "\n";
}

DeltaSearch find_delta(const LimitProblem& p, double eps, const Effort& effort, int max_halvings) {
    require_positive(eps, "epsilon");
    DeltaSearch s;
    double delta = 1.0;
    for (int i = 0; i <= max_halvings; ++i, delta /= 2) {
        s.delta = delta;
        s.halvings = i;
        s.verdict = verify_delta(p, eps, delta, effort);
        if (s.verdict.kind == VerdictKind::Proved) {
            s.status = VerdictKind::Proved;
            return s;
        }
    }
    s.status = VerdictKind::Unknown;
    return s;
}

// ---------------------------------------------------------------------------
// registry

registry_error::registry_error(const std::string& what, int line)
    : std::invalid_argument("registry line " + std::to_string(line) + ": " + what), line_(line) {}

const char* const kBuiltinRegistry = R"(# kind; expression; point; limit; closed form in eps
point; x^2; 3; 9; sqrt(9 + eps) - 3
point; 2*x + 1; 1; 3; eps / 2
sequence; 1/n; -; 0; ceil(1/eps)
sequence; (n + 1)/n; -; 1; ceil(1/eps)
infinity; 1/x; -; 0; 2/eps
)";

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double constant(const std::string& text, int line, const char* what) {
    try {
        const auto e = parse_expr(text);
        if (!e.is_constant()) throw registry_error(std::string(what) + " must be a constant", line);
        return eval_point(e, 0.0);
    } catch (const expr_syntax_error& err) {
        throw registry_error(std::string(what) + ": " + err.what(), line);
    } catch (const domain_error& err) {
        throw registry_error(std::string(what) + ": " + err.what(), line);
    }
}

}  // namespace

const Registry& Registry::builtin() {
    static const Registry r = parse(kBuiltinRegistry);
    return r;
}

Registry Registry::parse(std::string_view text) {
    Registry r;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const auto semi = s.find(';', start);
            fields.push_back(trim(std::string_view(s).substr(start, semi - start)));
            if (semi == std::string::npos) break;
            start = semi + 1;
        }
        if (fields.size() != 5) throw registry_error("expected 5 ';'-separated fields", line);

        RegistryEntry e;
        const auto kind = parse_problem_kind(fields[0]);
        if (!kind) throw registry_error("unknown kind '" + fields[0] + "'", line);
        e.kind = *kind;
        try {
            e.expr = parse_expr(fields[1]);
        } catch (const expr_syntax_error& err) {
            throw registry_error(std::string("expression: ") + err.what(), line);
        }
        if (e.kind == ProblemKind::FunctionLimitAtPoint) {
            if (fields[2] == "-") throw registry_error("point entries need x0", line);
            e.x0 = constant(fields[2], line, "x0");
        } else if (fields[2] != "-") {
            throw registry_error("only point entries take x0", line);
        }
        e.limit = constant(fields[3], line, "limit");
        if (fields[4] != "-") {
            try {
                e.closed_form = parse_expr(fields[4]);
            } catch (const expr_syntax_error& err) {
                throw registry_error(std::string("closed form: ") + err.what(), line);
            }
            const auto& var = e.closed_form->variable();
            if (var && *var != "eps") throw registry_error("closed form must be in eps", line);
        }
        r.add(std::move(e));
    }
    return r;
}

Registry Registry::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read registry " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

const RegistryEntry* Registry::find(const LimitProblem& p) const {
    for (const auto& e : entries_) {
        if (e.kind != p.kind || !same_structure(e.expr, p.expr)) continue;
        if (p.kind == ProblemKind::FunctionLimitAtPoint && e.x0 != p.x0) continue;
        return &e;
    }
    return nullptr;
}

double closed_form_delta(const LimitProblem& p, double eps, const Registry& r) {
    require_positive(eps, "epsilon");
    const auto* e = r.find(p);
    if (!e || p.kind != ProblemKind::FunctionLimitAtPoint || !e->closed_form)
        throw unregistered_problem("no closed-form delta registered for f(x)=" + p.expr.text() + " at x0=" +
                                   format_number(p.x0));
    if (e->limit != p.limit)
        throw unregistered_problem("the registered limit is " + format_number(e->limit) + ", not " +
                                   format_number(p.limit));
    const double delta = eval_point(*e->closed_form, eps);
    if (!(delta > 0)) throw domain_error("closed form gives a nonpositive delta");
    return delta;
}

// ---------------------------------------------------------------------------
// thresholds and witnesses

Threshold find_N(const LimitProblem& p, double eps, const Registry& r, const ScanOptions& scan) {
    if (p.kind != ProblemKind::SequenceLimit) throw std::invalid_argument("find_N needs a sequence problem");
    require_positive(eps, "epsilon");
    if (const auto* e = r.find(p); e && e->closed_form && e->limit == p.limit)
        return {std::max(0.0, std::ceil(eval_point(*e->closed_form, eps))), Basis::Analytic};

    long long last_bad = 0;
    for (long long n = 1; n <= scan.max_index; ++n) {
        const auto v = try_eval(p.expr, static_cast<double>(n));
        if (!v || !(std::fabs(*v - p.limit) < eps))
            last_bad = n;
        else if (n - last_bad >= scan.window)
            return {static_cast<double>(last_bad), Basis::Empirical};
    }
    return {std::nullopt, Basis::Empirical};
}

Threshold find_M(const LimitProblem& p, double eps, const Registry& r, const ScanOptions& scan) {
    if (p.kind != ProblemKind::FunctionLimitAtInfinity)
        throw std::invalid_argument("find_M needs a limit-at-infinity problem");
    require_positive(eps, "epsilon");
    if (const auto* e = r.find(p); e && e->closed_form && e->limit == p.limit)
        return {eval_point(*e->closed_form, eps), Basis::Analytic};

    std::size_t evaluations = 0;
    for (int k = 0; k <= 60; ++k) {
        const double m = std::ldexp(1.0, k);
        bool ok = true;
        // 16 samples per doubling over [M, M * 2^20]
        for (int j = 0; j <= 16 * 20 && ok; ++j) {
            if (++evaluations > scan.max_evaluations) return {std::nullopt, Basis::Empirical};
            const auto v = try_eval(p.expr, m * std::exp2(j / 16.0));
            ok = v && std::fabs(*v - p.limit) < eps;
        }
        if (ok) return {m, Basis::Empirical};
    }
    return {std::nullopt, Basis::Empirical};
}

std::optional<Witness> find_witness(const LimitProblem& p, double a, double eps, double bound,
                                    const ScanOptions& scan) {
    require_positive(eps, "epsilon");
    std::size_t evaluations = 0;
    std::optional<Witness> found;
    // returns true when the search should stop
    const auto probe = [&](double x) {
        if (++evaluations > scan.max_evaluations) return true;
        found = violation(p.expr, a, eps, x);
        return found.has_value();
    };

    switch (p.kind) {
        case ProblemKind::FunctionLimitAtPoint: {
            require_positive(bound, "delta");
            const double x0 = p.x0;
            const auto try_offset = [&](double offset) {
                for (double x : {x0 + offset, x0 - offset})
                    if (in_punctured(x, x0, bound) && probe(x)) return true;
                return false;
            };
            if (try_offset(bound / 2)) return found;
            for (int k = 2; k <= 60; ++k)
                if (try_offset(std::ldexp(bound, -k))) return found;
            for (int level = 2; level <= 20; ++level)
                for (long long j = 1; j < (1LL << level); j += 2)
                    if (try_offset(bound * static_cast<double>(j) / static_cast<double>(1LL << level))) return found;
            return std::nullopt;
        }
        case ProblemKind::SequenceLimit: {
            if (bound < 0) throw std::invalid_argument("N must be a natural number");
            const double first = std::floor(bound) + 1;
            for (int i = 0; i < 1000; ++i)
                if (probe(first + i)) return found;
            for (int k = 10; k <= 52; ++k)
                if (probe(first + std::ldexp(1.0, k))) return found;
            return std::nullopt;
        }
        case ProblemKind::FunctionLimitAtInfinity: {
            for (int i = 0; i < 1000; ++i)
                if (probe(bound + i)) return found;
            for (int k = 10; k <= 1000; ++k) {
                const double x = bound + std::ldexp(1.0, k);
                if (!std::isfinite(x)) break;
                if (probe(x)) return found;
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

namespace {

// Values at progressively finer scales: toward x0, or toward infinity.
std::vector<double> samples(const LimitProblem& p) {
    std::vector<double> out;
    for (int k = 10; k <= 40; k += 2) {
        if (p.kind == ProblemKind::FunctionLimitAtPoint) {
            const double h = std::ldexp(1.0, -k);
            for (double x : {p.x0 - h, p.x0 + h})
                if (auto v = try_eval(p.expr, x)) out.push_back(*v);
        } else {
            if (auto v = try_eval(p.expr, std::ldexp(1.0, k))) out.push_back(*v);
        }
    }
    return out;
}

}  // namespace

std::optional<double> estimate_limit(const LimitProblem& p, const Registry& r) {
    if (const auto* e = r.find(p)) return e->limit;
    const auto s = samples(p);
    if (s.empty()) return std::nullopt;
    if (p.kind == ProblemKind::FunctionLimitAtPoint && s.size() >= 2) return (s[s.size() - 1] + s[s.size() - 2]) / 2;
    return s.back();
}

EpsilonChoice choose_epsilon(const LimitProblem& p, double a, const Registry& r) {
    if (const auto* e = r.find(p)) {
        if (e->limit != a) return {std::fabs(e->limit - a) / 2, "registry"};
        return {1.0, "default"};
    }
    const auto s = samples(p);
    if (s.empty()) return {1.0, "default"};
    const auto tail = std::vector<double>(s.end() - static_cast<long>(std::min<std::size_t>(4, s.size())), s.end());
    const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
    const double center = p.kind == ProblemKind::FunctionLimitAtPoint && s.size() >= 2
                              ? (s[s.size() - 1] + s[s.size() - 2]) / 2
                              : s.back();
    const double eps = std::max(std::fabs(center - a), *hi - *lo) / 2;
    if (eps > 0 && std::isfinite(eps)) return {eps, "sampled"};
    return {1.0, "default"};
}

}  // namespace qarena::limits
