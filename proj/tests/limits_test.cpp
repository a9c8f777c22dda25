#include <doctest.h>

#include <cmath>
#include <random>

#include "qarena/limits.hpp"

using namespace qarena::limits;

namespace {

LimitProblem point(const char* f, double x0, double a) {
    return {ProblemKind::FunctionLimitAtPoint, parse_expr(f), x0, a};
}
LimitProblem sequence(const char* f, double a) { return {ProblemKind::SequenceLimit, parse_expr(f), 0, a}; }
LimitProblem at_infinity(const char* f, double a) {
    return {ProblemKind::FunctionLimitAtInfinity, parse_expr(f), 0, a};
}

// The refuting claim for x^2 at 3 must really be a counterexample.
void check_witness(const LimitProblem& p, double eps, double delta, const Witness& w) {
    CHECK(w.x != p.x0);
    CHECK(std::fabs(w.x - p.x0) < delta);
    const double fx = eval_point(p.expr, w.x);
    CHECK(fx == w.value);
    CHECK(std::fabs(fx - p.limit) >= eps);
}

// Samples the punctured neighbourhood, including points next to its edges.
bool sampled_ok(const LimitProblem& p, double eps, double delta, int samples, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < samples; ++i) {
        double x = p.x0 + u(rng) * delta;
        if (i % 10 == 0) x = std::nextafter(p.x0 + (i % 20 == 0 ? delta : -delta), p.x0);
        if (x == p.x0 || !(std::fabs(x - p.x0) < delta)) continue;
        if (!(std::fabs(eval_point(p.expr, x) - p.limit) < eps)) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("limits") {

TEST_CASE("interval arithmetic encloses pointwise results") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::uniform_real_distribution<double> t(0.0, 1.0);
    const auto random_interval = [&] {
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        return Interval(a, b);
    };
    const auto inside = [&](const Interval& i) { return i.lo + t(rng) * (i.hi - i.lo); };
    for (int i = 0; i < 100000; ++i) {
        const auto A = random_interval(), B = random_interval();
        const double x = inside(A), y = inside(B);
        REQUIRE(A.contains(x));
        CHECK((A + B).contains(x + y));
        CHECK((A - B).contains(x - y));
        CHECK((A * B).contains(x * y));
        if (!B.contains_zero()) CHECK((A / B).contains(x / y));
        CHECK(abs(A).contains(std::fabs(x)));
        CHECK(pow(A, 2).contains(x * x));
        CHECK(pow(A, 3).contains(x * x * x));
        if (A.lo >= 0) CHECK(sqrt(A).contains(std::sqrt(x)));
        CHECK(floor(A).contains(std::floor(x)));
    }
}

TEST_CASE("interval rejects bad bounds") {
    CHECK_THROWS_AS(Interval(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Interval(std::nan("")), domain_error);
    CHECK_THROWS_AS(Interval(1.0) / Interval(-1.0, 1.0), domain_error);
    CHECK_THROWS_AS(sqrt(Interval(-1.0, 1.0)), domain_error);
    CHECK(to_string(Interval(0.5, 2)) == "[0.5, 2]");
}

TEST_CASE("expression enclosures contain sampled values") {
    const char* exprs[] = {"x^2", "2*x + 1", "(x^2 - 9)/(x - 3)", "sqrt(abs(x)) - x^3/7", "1/(1 + x^2)",
                           "|x - 1| * floor(x)", "(x + 1)^-2", "ceil(x / 3) - √(x^2 + 1)"};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-5.0, 5.0), w(0.0, 0.5), t(0.0, 1.0);
    int checked = 0;
    for (const char* text : exprs) {
        const auto e = parse_expr(text);
        for (int i = 0; i < 12500; ++i) {
            const double lo = u(rng);
            const Interval box(lo, lo + w(rng));
            const double x = box.lo + t(rng) * box.width();
            Interval enc{0.0};
            try {
                enc = eval_interval(e, box);
            } catch (const domain_error&) {
                continue;
            }
            double v = 0;
            try {
                v = eval_point(e, x);
            } catch (const domain_error&) {
                FAIL("enclosure succeeded where the point is undefined: " << text << " at " << x);
            }
            CHECK(enc.contains(v));
            ++checked;
        }
    }
    CHECK(checked > 80000);
}

TEST_CASE("expression parsing") {
    CHECK(parse_expr("x^2").text() == "x^2");
    CHECK(parse_expr("sqrt(9 + eps) - 3").text() == "sqrt(9 + eps) - 3");
    CHECK(*parse_expr("sqrt(9 + eps) - 3").variable() == "eps");
    CHECK(parse_expr("3 − √8").text() == "3 - sqrt(8)");
    CHECK(parse_expr("2·x × 3").text() == "2 * x * 3");
    CHECK(parse_expr("|x - 1|").text() == "abs(x - 1)");
    CHECK(parse_expr("-(x + 1)^2").text() == "-(x + 1)^2");
    CHECK(parse_expr("1/(n + 1)").text() == "1 / (n + 1)");
    CHECK(parse_expr("x - (1 - x)").text() == "x - (1 - x)");
    CHECK(parse_expr("1e-3 * x").text() == "0.001 * x");
    CHECK(parse_expr("3").is_constant());
    CHECK(eval_point(parse_expr("3 - sqrt(8)"), 0) == doctest::Approx(0.17157287525));
    CHECK(eval_point(parse_expr("x^-1"), 4) == 0.25);
    CHECK(same_structure(parse_expr("1/n"), parse_expr("1 / x")));
    CHECK_FALSE(same_structure(parse_expr("1/n"), parse_expr("2/n")));
    CHECK_FALSE(parse_expr("1/n") == parse_expr("1/x"));

    const char* round_trip[] = {"x^2 - 2*x/(x + 1)", "-x^3", "abs(x) * -2", "ceil(1/eps)", "((x))", "2 - (3 - x)"};
    for (const char* t : round_trip) {
        const auto e = parse_expr(t);
        CHECK(parse_expr(e.text()) == e);
    }
}

TEST_CASE("expression errors") {
    const auto column = [](const char* text) {
        try {
            parse_expr(text);
        } catch (const expr_syntax_error& e) {
            return e.column();
        }
        return 0;
    };
    CHECK(column("") == 1);
    CHECK(column("x +") == 4);
    CHECK(column("x + y") == 5);
    CHECK(column("x^y") == 3);
    CHECK(column("(x") == 3);
    CHECK(column("x $") == 3);
    CHECK(column("sqrt x") == 6);
    CHECK_THROWS_AS(eval_point(parse_expr("1/x"), 0), domain_error);
    CHECK_THROWS_AS(eval_point(parse_expr("sqrt(x)"), -1), domain_error);
    CHECK_THROWS_AS(eval_point(parse_expr("x^64"), 1e10), domain_error);
    CHECK_THROWS_AS(eval_interval(parse_expr("1/x"), Interval(-1, 1)), domain_error);
}

TEST_CASE("the naive delta for x^2 at 3 is refuted") {
    const auto p = point("x^2", 3, 9);
    const double delta = 3 - std::sqrt(8.0);
    const auto v = verify_delta(p, 1.0, delta);
    REQUIRE(v.kind == VerdictKind::Refuted);
    REQUIRE(v.witness);
    CHECK(v.witness->x == 3.17);
    check_witness(p, 1.0, delta, *v.witness);
    CHECK(v.reason.find("3.17") != std::string::npos);
}

TEST_CASE("a safe delta is proved") {
    const auto p = point("x^2", 3, 9);
    const auto v = verify_delta(p, 1.0, 0.12);
    REQUIRE(v.kind == VerdictKind::Proved);
    CHECK(!v.certificate.pieces.empty());
    CHECK(v.reason == "certified on " + std::to_string(v.certificate.pieces.size()) + " subintervals");
    // pieces tile [3 - 0.12, 3 + 0.12] apart from the core
    double covered = 0;
    for (const auto& piece : v.certificate.pieces) {
        covered += piece.domain.width();
        CHECK(std::fabs(piece.enclosure.hi - 9) < 1.0);
        CHECK(std::fabs(piece.enclosure.lo - 9) < 1.0);
    }
    if (v.certificate.core) covered += v.certificate.core->width();
    CHECK(covered >= 0.24);
    std::mt19937_64 rng(3);
    CHECK(sampled_ok(p, 1.0, 0.12, 20000, rng));
}

TEST_CASE("verify_delta argument checks") {
    const auto p = point("x^2", 3, 9);
    CHECK_THROWS_AS(verify_delta(p, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(verify_delta(p, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(verify_delta(p, -1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(verify_delta(sequence("1/n", 0), 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("removable singularity is certified around a core") {
    const auto p = point("(x^2 - 9)/(x - 3)", 3, 6);
    const auto v = verify_delta(p, 0.5, 0.25);
    REQUIRE(v.kind == VerdictKind::Proved);
    REQUIRE(v.certificate.core);
    CHECK(v.certificate.core->contains(3.0));
    CHECK(v.certificate.core->width() < 1e-11);
}

TEST_CASE("undefined points and budgets give unknown") {
    const auto undefined = verify_delta(point("sqrt(x)", 0, 0), 1.0, 0.5);
    CHECK(undefined.kind == VerdictKind::Unknown);
    CHECK(undefined.reason.find("undefined") != std::string::npos);

    const auto p = point("x^2", 3, 9);
    Effort tiny;
    tiny.max_boxes = 3;
    // dependency between x*x and 6*x forces subdivision
    const auto wobbly = point("x*x - 6*x + 18", 3, 9);
    const auto budget = verify_delta(wobbly, 0.01, 0.05, tiny);
    CHECK(budget.kind == VerdictKind::Unknown);
    CHECK(budget.certificate.pieces.empty());
    CHECK(verify_delta(wobbly, 0.01, 0.05).kind == VerdictKind::Proved);

    // the exact closed form touches |f - a| = eps at the boundary
    const double edge = std::sqrt(10.0) - 3;
    CHECK(verify_delta(p, 1.0, edge).kind != VerdictKind::Proved);
}

TEST_CASE("certificate json") {
    const auto p = point("x^2", 3, 9);
    const auto refuted = certificate_json(p, 1, 3 - std::sqrt(8.0), verify_delta(p, 1, 3 - std::sqrt(8.0)));
    CHECK(refuted.find("\"schema\": \"certificate/1\"") != std::string::npos);
    CHECK(refuted.find("\"verdict\": \"refuted\"") != std::string::npos);
    CHECK(refuted.find("\"x\": 3.17") != std::string::npos);
    CHECK(refuted.find("\"core\": null") != std::string::npos);
    const auto proved = certificate_json(p, 1, 0.12, verify_delta(p, 1, 0.12));
    CHECK(proved.find("\"verdict\": \"proved\"") != std::string::npos);
    CHECK(proved.find("\"witness\": null") != std::string::npos);
    CHECK(proved.find("\"f_lo\"") != std::string::npos);
}

TEST_CASE("find_delta halves until proved") {
    const auto p = point("x^2", 3, 9);
    // the largest power of two below sqrt(9 + eps) - 3
    const auto oracle = [](double eps) {
        const double bound = std::sqrt(9 + eps) - 3;
        double d = 1;
        while (d > bound) d /= 2;
        return d;
    };
    const auto one = find_delta(p, 1.0);
    CHECK(one.status == VerdictKind::Proved);
    CHECK(one.delta == 0.125);
    CHECK(one.delta == oracle(1.0));
    CHECK(one.halvings == 3);
    const auto tenth = find_delta(p, 0.1);
    CHECK(tenth.delta == 0.015625);
    CHECK(tenth.delta == oracle(0.1));
    CHECK(find_delta(point("5", 2, 5), 0.1).delta == 1.0);
    CHECK(find_delta(point("2*x + 1", 1, 3), 0.5).delta == 0.125);
}

TEST_CASE("closed-form delta") {
    const auto p = point("x^2", 3, 9);
    CHECK(closed_form_delta(p, 1.0) == std::sqrt(10.0) - 3);
    CHECK(closed_form_delta(p, 0.1) == std::sqrt(9.1) - 3);
    CHECK(closed_form_delta(point("2*x + 1", 1, 3), 0.5) == 0.25);
    CHECK_THROWS_AS(closed_form_delta(point("x^2", 3, 8), 1.0), unregistered_problem);
    CHECK_THROWS_AS(closed_form_delta(point("x^3", 3, 27), 1.0), unregistered_problem);
    CHECK_THROWS_AS(closed_form_delta(point("x^2", 2, 4), 1.0), unregistered_problem);
}

TEST_CASE("random eps: closed form holds, the naive formula fails") {
    const auto p = point("x^2", 3, 9);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> log_eps(-3.0, std::log10(8.0));
    for (int i = 0; i < 100; ++i) {
        const double eps = std::pow(10.0, log_eps(rng));
        const double safe = 0.99 * closed_form_delta(p, eps);
        const auto good = verify_delta(p, eps, safe);
        CHECK_MESSAGE(good.kind == VerdictKind::Proved, "eps=" << eps);

        const double naive = 3 - std::sqrt(9 - eps);
        const auto bad = verify_delta(p, eps, naive);
        REQUIRE_MESSAGE(bad.kind == VerdictKind::Refuted, "eps=" << eps);
        check_witness(p, eps, naive, *bad.witness);
    }
}

TEST_CASE("verdicts agree with sampling") {
    struct Case {
        const char* f;
        double x0, a;
    };
    const Case cases[] = {{"x^2", 3, 9}, {"2*x + 1", 1, 3}, {"1/x", 2, 0.5}, {"sqrt(x)", 4, 2}, {"x^3 - x", 1, 0}};
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ue(0.01, 1.0), ud(0.001, 0.5);
    int proved = 0, refuted = 0;
    for (int i = 0; i < 50; ++i) {
        const auto& c = cases[i % 5];
        const auto p = point(c.f, c.x0, c.a);
        const double eps = ue(rng), delta = ud(rng);
        const auto v = verify_delta(p, eps, delta);
        if (v.kind == VerdictKind::Proved) {
            ++proved;
            CHECK_MESSAGE(sampled_ok(p, eps, delta, 2000, rng), c.f << " eps=" << eps << " delta=" << delta);
        } else if (v.kind == VerdictKind::Refuted) {
            ++refuted;
            check_witness(p, eps, delta, *v.witness);
        }
    }
    CHECK(proved > 0);
    CHECK(refuted > 0);
}

TEST_CASE("registry") {
    const auto& r = Registry::builtin();
    CHECK(r.entries().size() == 5);
    CHECK(r.find(sequence("1/k", 0)) != nullptr);
    CHECK(r.find(point("x^2", 2, 4)) == nullptr);

    const auto parsed = Registry::parse("# comment\n\npoint; x^3; 2; 8; -\n  sequence ; 1/n^2 ; - ; 0 ; 1/sqrt(eps)\n");
    REQUIRE(parsed.entries().size() == 2);
    CHECK(!parsed.entries()[0].closed_form);
    CHECK(*parsed.entries()[0].x0 == 2);
    CHECK(parsed.entries()[1].closed_form->text() == "1 / sqrt(eps)");

    const auto line_of = [](const char* text) {
        try {
            Registry::parse(text);
        } catch (const registry_error& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("point; x^2; 3; 9\n") == 1);
    CHECK(line_of("# ok\nwave; x; 1; 1; -\n") == 2);
    CHECK(line_of("point; x^; 3; 9; -\n") == 1);
    CHECK(line_of("point; x^2; -; 9; -\n") == 1);
    CHECK(line_of("sequence; 1/n; 3; 0; -\n") == 1);
    CHECK(line_of("point; x^2; 3; x; -\n") == 1);
    CHECK(line_of("point; x^2; 3; 9; sqrt(9 + t)\n") == 1);
    CHECK_THROWS_AS(Registry::load("/nonexistent/registry.txt"), std::runtime_error);
}

TEST_CASE("registered point strategies are sound") {
    for (const auto& e : Registry::builtin().entries()) {
        if (e.kind != ProblemKind::FunctionLimitAtPoint) continue;
        const LimitProblem p{e.kind, e.expr, *e.x0, e.limit};
        for (double eps : {2.0, 1.0, 0.3, 0.01, 1e-4}) {
            const double delta = closed_form_delta(p, eps);
            CHECK_MESSAGE(verify_delta(p, eps, 0.99 * delta).kind == VerdictKind::Proved, e.expr.text());
        }
    }
}

TEST_CASE("find_N") {
    const auto harmonic = sequence("1/n", 0);
    const auto n10 = find_N(harmonic, 0.1);
    CHECK(n10.basis == Basis::Analytic);
    CHECK(*n10.value == 10);
    const auto shifted = find_N(sequence("(n + 1)/n", 1), 0.01);
    CHECK(*shifted.value == 100);
    CHECK(*find_N(sequence("7", 7), 0.5).value == 0);

    // unregistered: the empirical scan agrees with a direct search for the last bad index
    const auto squares = sequence("1/n^2", 0);
    const auto empirical = find_N(squares, 0.001);
    CHECK(empirical.basis == Basis::Empirical);
    long long last_bad = 0;
    for (long long n = 1; n < 100000; ++n)
        if (!(1.0 / (double(n) * double(n)) < 0.001)) last_bad = n;
    CHECK(*empirical.value == last_bad);
    CHECK(*find_N(sequence("1/n", 0.5), 0.1, Registry{}).value >= 0);
    CHECK(!find_N(sequence("n", 0), 0.1, Registry{}).value);
    // a late spike beyond the window is invisible to the scan
    ScanOptions scan;
    scan.window = 10;
    CHECK(*find_N(sequence("floor(20/n)", 0), 0.5, Registry{}, scan).value == 20);
    // claimed limit differs from the registered one: empirical
    CHECK(find_N(sequence("1/n", 1), 0.5).basis == Basis::Empirical);
}

TEST_CASE("find_M") {
    const auto m = find_M(at_infinity("1/x", 0), 0.1);
    CHECK(m.basis == Basis::Analytic);
    CHECK(*m.value == 20);
    const auto e = find_M(at_infinity("1/x^2", 0), 0.01);
    CHECK(e.basis == Basis::Empirical);
    REQUIRE(e.value);
    CHECK(*e.value == 16);  // first power of two with 1/M^2 < 0.01
    CHECK(!find_M(at_infinity("x", 0), 0.1).value);
}

TEST_CASE("find_witness") {
    const auto p = point("x^2", 3, 9);
    const auto w = find_witness(p, 8, 0.5, 0.1);
    REQUIRE(w);
    CHECK(w->x == 3.05);
    CHECK(!find_witness(p, 9, 1.0, 0.12));

    const auto seq = find_witness(sequence("1/n", 0), 1, 0.5, 7);
    REQUIRE(seq);
    CHECK(seq->x == 8);
    CHECK(!find_witness(sequence("1/n", 0), 0, 0.1, 10));

    const auto inf = find_witness(at_infinity("1/x", 0), 1, 0.5, 3);
    REQUIRE(inf);
    CHECK(inf->x == 3);
    // a true limit with a delta too wide for eps
    const auto wide = find_witness(p, 9, 1e-6, 1e-3);
    REQUIRE(wide);
    check_witness(p, 1e-6, 1e-3, *wide);
}

TEST_CASE("choose_epsilon and estimate_limit") {
    const auto p = point("x^2", 3, 9);
    const auto wrong = choose_epsilon(p, 8);
    CHECK(wrong.epsilon == 0.5);
    CHECK(wrong.basis == "registry");
    CHECK(choose_epsilon(sequence("1/n", 0), 1).epsilon == 0.5);
    const auto right = choose_epsilon(p, 9);
    CHECK(right.epsilon == 1);
    CHECK(right.basis == "default");

    const auto sampled = choose_epsilon(point("x^3", 2, 7), 7, Registry{});
    CHECK(sampled.basis == "sampled");
    CHECK(sampled.epsilon == doctest::Approx(0.5).epsilon(1e-6));

    CHECK(*estimate_limit(p) == 9);
    CHECK(*estimate_limit(point("(x^2 - 9)/(x - 3)", 3, 0)) == doctest::Approx(6));
    CHECK(*estimate_limit(at_infinity("(2*x + 1)/x", 0)) == doctest::Approx(2));
    CHECK(!estimate_limit(point("sqrt(x)", -1, 0)));
}

}  // TEST_SUITE
