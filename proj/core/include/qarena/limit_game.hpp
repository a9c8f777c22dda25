#pragma once

// The limit claim as a four-move game. In the convergence game the
// Verifier picks a and delta (or N, M) and the Falsifier picks eps and x
// (or n). The divergence game plays the negated formula with the same
// players: its existential moves (eps, x) belong to the Falsifier.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qarena/formula.hpp"
#include "qarena/game.hpp"
#include "qarena/limits.hpp"

namespace qarena::limits {

enum class Phase { ChooseA, ChooseEpsilon, ChooseDelta, ChooseN, ChooseM, ChooseX, ChooseNIndex, Verdict };
std::string_view to_string(Phase p);

enum class HumanRole { Verifier, Falsifier, Both };
std::string_view to_string(HumanRole r);
std::optional<HumanRole> parse_human_role(std::string_view text);

enum class Rejection { WrongMover, Nonpositive, OutsideNeighborhood, IndexNotAboveN, BadValue, GameOver };
std::string_view to_string(Rejection r);

class move_rejected : public std::invalid_argument {
public:
    move_rejected(Rejection code, const std::string& what) : std::invalid_argument(what), code_(code) {}
    Rejection code() const noexcept { return code_; }

private:
    Rejection code_;
};

struct LimitGameConfig {
    LimitProblem problem;      // problem.limit is ignored; the game chooses a
    std::optional<double> a;   // preset claimed limit, skipping ChooseA
    bool divergence = false;
    HumanRole human = HumanRole::Falsifier;
};

struct LimitMove {
    Phase phase = Phase::ChooseA;
    game::Player player = game::Player::Verifier;
    double value = 0;
    std::string text;  // as submitted, or the engine's number
    bool engine = false;
    std::string note;  // how the engine chose, empty for human moves
};

struct LimitOutcome {
    bool inequality_holds = false;  // |f(x) - a| < eps (resp. |a - a_n| < eps)
    double value = 0;               // f(x) or a_n
    double distance = 0;            // |f(x) - a|
    game::Player winner = game::Player::Verifier;
    std::string text;  // e.g. "|f(2.9) - 9| = 0.59 < 1"
};

/// Formula for the convergence claim of a problem kind, over the symbols
/// f (or seq), x0, a, eps, delta/N/M and x/n.
formula::Formula limit_formula(ProblemKind kind);

class LimitGame {
public:
    /// Plays engine moves up to the first human decision.
    explicit LimitGame(LimitGameConfig config, const Registry& registry = Registry::builtin());

    const LimitGameConfig& config() const { return config_; }
    Phase phase() const { return phase_; }
    bool finished() const { return phase_ == Phase::Verdict; }

    /// Player owning the current phase (Verifier once finished).
    game::Player mover() const;
    bool human_to_move() const;

    /// The formula being played: the limit formula, negated for divergence.
    const formula::Formula& session_formula() const { return formula_; }
    /// Phase sequence as quantifier symbols of the session formula, e.g. "∃∀∃∀".
    std::string phase_scheme() const;
    /// Phases in play order, Verdict excluded.
    const std::vector<Phase>& phases() const { return phases_; }

    /// Submits `text` (a number or constant expression such as "3 - sqrt(8)")
    /// for the current phase as `who`, then lets the engine answer.
    void play(game::Player who, std::string_view text);

    const std::vector<LimitMove>& history() const { return history_; }
    const std::optional<LimitOutcome>& outcome() const { return outcome_; }

    std::optional<double> a() const { return a_; }
    std::optional<double> epsilon() const { return eps_; }
    /// delta, N or M.
    std::optional<double> bound() const { return bound_; }
    /// x or n.
    std::optional<double> point() const { return point_; }

private:
    bool engine_owns(game::Player p) const;
    void accept(game::Player who, double value, std::string text, bool engine, std::string note);
    void check_value(double v) const;
    void run_engine();
    void settle();

    LimitGameConfig config_;
    const Registry* registry_;
    formula::Formula formula_;
    std::vector<Phase> phases_;
    std::vector<formula::QuantKind> kinds_;  // quantifier kind per phase
    std::size_t step_ = 0;
    Phase phase_ = Phase::ChooseA;
    std::vector<LimitMove> history_;
    std::optional<double> a_, eps_, bound_, point_;
    std::optional<LimitOutcome> outcome_;
};

}  // namespace qarena::limits
