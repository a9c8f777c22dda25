#include <doctest.h>

#include <cmath>
#include <random>

#include "qarena/limit_game.hpp"

using namespace qarena::limits;
using qarena::game::Player;
namespace formula = qarena::formula;

namespace {

LimitGameConfig square_game(HumanRole human, std::optional<double> a = 9.0) {
    LimitGameConfig c;
    c.problem = {ProblemKind::FunctionLimitAtPoint, parse_expr("x^2"), 3, 0};
    c.a = a;
    c.human = human;
    return c;
}

LimitGameConfig harmonic_divergence(HumanRole human) {
    LimitGameConfig c;
    c.problem = {ProblemKind::SequenceLimit, parse_expr("1/n"), 0, 0};
    c.divergence = true;
    c.human = human;
    return c;
}

Rejection rejection_of(LimitGame& g, Player who, const char* text) {
    try {
        g.play(who, text);
    } catch (const move_rejected& e) {
        return e.code();
    }
    FAIL("move was accepted: " << text);
    return Rejection::GameOver;
}

}  // namespace

TEST_SUITE("limits") {

TEST_CASE("worked example played by two humans") {
    LimitGame g(square_game(HumanRole::Both, std::nullopt));
    CHECK(g.phase() == Phase::ChooseA);
    g.play(Player::Verifier, "9");
    CHECK(g.phase() == Phase::ChooseEpsilon);
    g.play(Player::Falsifier, "1");
    g.play(Player::Verifier, "3 - sqrt(8)");
    CHECK(*g.bound() == 3 - std::sqrt(8.0));
    g.play(Player::Falsifier, "2.9");
    REQUIRE(g.finished());
    CHECK(g.outcome()->value == 8.41);
    CHECK(g.outcome()->inequality_holds);
    CHECK(g.outcome()->winner == Player::Verifier);
    CHECK(g.outcome()->text == "|f(2.9) - 9| = 0.59 < 1");
    CHECK(g.history().size() == 4);

    LimitGame g2(square_game(HumanRole::Both));
    g2.play(Player::Falsifier, "1");
    g2.play(Player::Verifier, "3 − √8");
    g2.play(Player::Falsifier, "2.95");
    CHECK(g2.outcome()->value == 8.7025);
    CHECK(g2.outcome()->inequality_holds);

    LimitGame g3(square_game(HumanRole::Both));
    g3.play(Player::Falsifier, "0.1");
    g3.play(Player::Verifier, "3 - sqrt(8.9)");
    g3.play(Player::Falsifier, "2.99");
    CHECK(g3.outcome()->value == doctest::Approx(8.9401));
    CHECK(g3.outcome()->inequality_holds);
    CHECK(g3.outcome()->distance < 0.1);
}

TEST_CASE("the naive delta loses to the witness") {
    LimitGame g(square_game(HumanRole::Both));
    g.play(Player::Falsifier, "1");
    g.play(Player::Verifier, "3 - sqrt(8)");
    g.play(Player::Falsifier, "3.17");
    CHECK_FALSE(g.outcome()->inequality_holds);
    CHECK(g.outcome()->winner == Player::Falsifier);
}

TEST_CASE("engine verifier answers with the closed form") {
    LimitGame g(square_game(HumanRole::Falsifier));
    CHECK(g.phase() == Phase::ChooseEpsilon);
    CHECK(g.human_to_move());
    g.play(Player::Falsifier, "1");
    CHECK(g.phase() == Phase::ChooseX);
    CHECK(*g.bound() == std::sqrt(10.0) - 3);
    CHECK(g.history().back().engine);
    CHECK(g.history().back().note == "closed form");
    g.play(Player::Falsifier, "2.9");
    CHECK(g.outcome()->inequality_holds);
    CHECK(g.outcome()->winner == Player::Verifier);

    LimitGame tenth(square_game(HumanRole::Falsifier));
    tenth.play(Player::Falsifier, "0.1");
    CHECK(*tenth.bound() == std::sqrt(9.1) - 3);
    tenth.play(Player::Falsifier, "2.99");
    CHECK(tenth.outcome()->inequality_holds);
}

TEST_CASE("engine verifier wins every legal reply") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ue(0.001, 5.0), ut(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        LimitGame g(square_game(HumanRole::Falsifier));
        g.play(Player::Falsifier, format_number(ue(rng)).c_str());
        double x = 3 + ut(rng) * *g.bound();
        if (x == 3) x = 3 + *g.bound() / 2;
        g.play(Player::Falsifier, format_number(x).c_str());
        CHECK(g.outcome()->winner == Player::Verifier);
    }
}

TEST_CASE("engine falsifier refutes a wrong claim") {
    LimitGame g(square_game(HumanRole::Verifier, 8.0));
    CHECK(*g.epsilon() == 0.5);
    CHECK(g.phase() == Phase::ChooseDelta);
    g.play(Player::Verifier, "0.1");
    REQUIRE(g.finished());
    CHECK(*g.point() == 3.05);
    CHECK(g.outcome()->winner == Player::Falsifier);
}

TEST_CASE("engine opens with the limit when it owns a") {
    LimitGame g(square_game(HumanRole::Falsifier, std::nullopt));
    CHECK(*g.a() == 9);
    CHECK(g.phase() == Phase::ChooseEpsilon);
}

TEST_CASE("rejections leave the phase unchanged") {
    LimitGame g(square_game(HumanRole::Both));
    CHECK(rejection_of(g, Player::Verifier, "1") == Rejection::WrongMover);
    CHECK(rejection_of(g, Player::Falsifier, "0") == Rejection::Nonpositive);
    CHECK(rejection_of(g, Player::Falsifier, "-1") == Rejection::Nonpositive);
    CHECK(rejection_of(g, Player::Falsifier, "x + 1") == Rejection::BadValue);
    CHECK(rejection_of(g, Player::Falsifier, "1/0") == Rejection::BadValue);
    CHECK(rejection_of(g, Player::Falsifier, "one") == Rejection::BadValue);
    CHECK(g.phase() == Phase::ChooseEpsilon);
    g.play(Player::Falsifier, "1");
    CHECK(rejection_of(g, Player::Verifier, "0") == Rejection::Nonpositive);
    g.play(Player::Verifier, "0.1");
    CHECK(rejection_of(g, Player::Falsifier, "3") == Rejection::OutsideNeighborhood);
    CHECK(rejection_of(g, Player::Falsifier, "3.1") == Rejection::OutsideNeighborhood);
    CHECK(rejection_of(g, Player::Falsifier, "2.8") == Rejection::OutsideNeighborhood);
    CHECK(g.phase() == Phase::ChooseX);
    CHECK(g.history().size() == 2);
    g.play(Player::Falsifier, "3.05");
    CHECK(rejection_of(g, Player::Falsifier, "1") == Rejection::GameOver);

    LimitGame engine(square_game(HumanRole::Falsifier));
    CHECK(rejection_of(engine, Player::Verifier, "1") == Rejection::WrongMover);

    LimitGameConfig seq;
    seq.problem = {ProblemKind::SequenceLimit, parse_expr("1/n"), 0, 0};
    seq.a = 0;
    seq.human = HumanRole::Both;
    LimitGame s(seq);
    s.play(Player::Falsifier, "0.1");
    CHECK(rejection_of(s, Player::Verifier, "2.5") == Rejection::BadValue);
    CHECK(rejection_of(s, Player::Verifier, "-1") == Rejection::BadValue);
    s.play(Player::Verifier, "10");
    CHECK(rejection_of(s, Player::Falsifier, "10") == Rejection::IndexNotAboveN);
    CHECK(rejection_of(s, Player::Falsifier, "10.5") == Rejection::BadValue);
    s.play(Player::Falsifier, "11");
    CHECK(s.outcome()->inequality_holds);
    CHECK(s.outcome()->text == "|a_11 - 0| = 0.0909090909091 < 0.1");
}

TEST_CASE("phase order follows the formula scheme") {
    for (auto kind : {ProblemKind::FunctionLimitAtPoint, ProblemKind::SequenceLimit,
                      ProblemKind::FunctionLimitAtInfinity}) {
        LimitGameConfig c;
        c.problem = {kind, parse_expr("1/x"), 1, 0};
        c.human = HumanRole::Both;
        const LimitGame g(c);
        CHECK(g.phase_scheme() == formula::scheme_of(limit_formula(kind)));
        CHECK(g.phase_scheme() == "∃∀∃∀");
        CHECK(g.phases().size() == limit_formula(kind).prefix.size());
        // the Verifier owns the existential moves
        CHECK(g.mover() == Player::Verifier);

        c.divergence = true;
        const LimitGame d(c);
        CHECK(d.phase_scheme() == formula::scheme_of(formula::negate(limit_formula(kind))));
        CHECK(d.phase_scheme() == "∀∃∀∃");
        CHECK(d.session_formula() == formula::negate(limit_formula(kind), {true}));
        CHECK(d.mover() == Player::Verifier);
    }
    LimitGameConfig c = square_game(HumanRole::Both, std::nullopt);
    LimitGame g(c);
    std::vector<Player> owners;
    const char* moves[] = {"9", "1", "0.1", "3.01"};
    for (const char* m : moves) {
        owners.push_back(g.mover());
        g.play(g.mover(), m);
    }
    CHECK(owners == std::vector<Player>{Player::Verifier, Player::Falsifier, Player::Verifier, Player::Falsifier});
}

TEST_CASE("divergence: engine falsifier beats 1/n -> 1") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long long> un(0, 1'000'000);
    for (int i = 0; i < 200; ++i) {
        LimitGame g(harmonic_divergence(HumanRole::Verifier));
        CHECK(g.phase() == Phase::ChooseA);
        g.play(Player::Verifier, "1");
        CHECK(*g.epsilon() == 0.5);
        const long long N = i == 0 ? 0 : i == 1 ? 1'000'000 : un(rng);
        g.play(Player::Verifier, std::to_string(N));
        REQUIRE(g.finished());
        const double n = *g.point();
        CHECK(n > double(N));
        CHECK(std::fabs(1 - 1 / n) >= 0.5);
        CHECK(g.outcome()->winner == Player::Falsifier);
        CHECK_FALSE(g.outcome()->inequality_holds);
    }
}

TEST_CASE("divergence: a true claim defeats the engine") {
    LimitGame g(harmonic_divergence(HumanRole::Verifier));
    g.play(Player::Verifier, "0");
    CHECK(g.history().back().note == "default");
    g.play(Player::Verifier, "1");  // eps = 1, N = 1
    REQUIRE(g.finished());
    CHECK(g.history().back().note == "no witness found");
    CHECK(g.outcome()->winner == Player::Verifier);
}

TEST_CASE("limit at infinity") {
    LimitGameConfig c;
    c.problem = {ProblemKind::FunctionLimitAtInfinity, parse_expr("1/x"), 0, 0};
    c.a = 0;
    c.human = HumanRole::Falsifier;
    LimitGame g(c);
    g.play(Player::Falsifier, "0.1");
    CHECK(*g.bound() == 20);
    CHECK(rejection_of(g, Player::Falsifier, "19") == Rejection::OutsideNeighborhood);
    g.play(Player::Falsifier, "20");
    CHECK(g.outcome()->inequality_holds);
    CHECK(g.outcome()->winner == Player::Verifier);
}

TEST_CASE("unregistered function: engine delta comes from subdivision") {
    LimitGameConfig c;
    c.problem = {ProblemKind::FunctionLimitAtPoint, parse_expr("x^3"), 2, 0};
    c.a = 8;
    c.human = HumanRole::Falsifier;
    LimitGame g(c);
    g.play(Player::Falsifier, "1");
    CHECK(g.history().back().note == "certified by subdivision");
    const LimitProblem p{ProblemKind::FunctionLimitAtPoint, parse_expr("x^3"), 2, 8};
    CHECK(verify_delta(p, 1, *g.bound()).kind == VerdictKind::Proved);
}

}  // TEST_SUITE
