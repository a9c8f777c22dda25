#include "qarena/limit_game.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace qarena::limits {

using game::Player;

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::ChooseA: return "ChooseA";
        case Phase::ChooseEpsilon: return "ChooseEpsilon";
        case Phase::ChooseDelta: return "ChooseDelta";
        case Phase::ChooseN: return "ChooseN";
        case Phase::ChooseM: return "ChooseM";
        case Phase::ChooseX: return "ChooseX";
        case Phase::ChooseNIndex: return "ChooseNIndex";
        case Phase::Verdict: return "Verdict";
    }
    return "Verdict";
}

std::string_view to_string(HumanRole r) {
    switch (r) {
        case HumanRole::Verifier: return "verifier";
        case HumanRole::Falsifier: return "falsifier";
        case HumanRole::Both: return "both";
    }
    return "both";
}

std::optional<HumanRole> parse_human_role(std::string_view text) {
    if (text == "verifier" || text == "Verifier") return HumanRole::Verifier;
    if (text == "falsifier" || text == "Falsifier") return HumanRole::Falsifier;
    if (text == "both" || text == "Both") return HumanRole::Both;
    return std::nullopt;
}

std::string_view to_string(Rejection r) {
    switch (r) {
        case Rejection::WrongMover: return "wrong_mover";
        case Rejection::Nonpositive: return "nonpositive";
        case Rejection::OutsideNeighborhood: return "outside_neighborhood";
        case Rejection::IndexNotAboveN: return "index_not_above_N";
        case Rejection::BadValue: return "bad_value";
        case Rejection::GameOver: return "game_over";
    }
    return "bad_value";
}

formula::Formula limit_formula(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::FunctionLimitAtPoint:
            return formula::parse_formula(
                "exists a. forall eps>0. exists delta>0. forall x. "
                "(0 < abs(x - x0) and abs(x - x0) < delta) -> abs(f(x) - a) < eps");
        case ProblemKind::SequenceLimit:
            return formula::parse_formula("exists a. forall eps>0. exists N:Nat. forall n:Nat>N. abs(a - seq(n)) < eps");
        case ProblemKind::FunctionLimitAtInfinity:
            return formula::parse_formula(
                "exists a. forall eps>0. exists M:R. forall x:R. x >= M -> abs(f(x) - a) < eps");
    }
    throw std::invalid_argument("unknown problem kind");
}

namespace {

std::string display(double v) {
    std::ostringstream out;
    out << std::setprecision(12) << v;
    return out.str();
}

std::optional<double> defined_at(const Expr& e, double v) {
    try {
        return eval_point(e, v);
    } catch (const domain_error&) {
        return std::nullopt;
    }
}

bool is_natural(double v) { return v >= 0 && std::floor(v) == v && v < 9.007199254740992e15; }

double parse_value(std::string_view text) {
    try {
        const auto e = parse_expr(text);
        if (!e.is_constant()) throw move_rejected(Rejection::BadValue, "move must be a number, not an expression in " +
                                                                          *e.variable());
        return eval_point(e, 0.0);
    } catch (const expr_syntax_error& err) {
        throw move_rejected(Rejection::BadValue, std::string("cannot read move: ") + err.what());
    } catch (const domain_error& err) {
        throw move_rejected(Rejection::BadValue, std::string("cannot evaluate move: ") + err.what());
    }
}

}  // namespace

LimitGame::LimitGame(LimitGameConfig config, const Registry& registry)
    : config_(std::move(config)), registry_(&registry) {
    const auto kind = config_.problem.kind;
    const auto base = limit_formula(kind);
    formula_ = config_.divergence ? formula::negate(base, {true}) : base;
    for (const auto& q : formula_.prefix) kinds_.push_back(q.kind);
    phases_ = {Phase::ChooseA, Phase::ChooseEpsilon};
    switch (kind) {
        case ProblemKind::FunctionLimitAtPoint: phases_.insert(phases_.end(), {Phase::ChooseDelta, Phase::ChooseX}); break;
        case ProblemKind::SequenceLimit: phases_.insert(phases_.end(), {Phase::ChooseN, Phase::ChooseNIndex}); break;
        case ProblemKind::FunctionLimitAtInfinity: phases_.insert(phases_.end(), {Phase::ChooseM, Phase::ChooseX}); break;
    }
    if (config_.a) {
        if (!std::isfinite(*config_.a)) throw std::invalid_argument("claimed limit must be finite");
        a_ = config_.a;
        step_ = 1;
    }
    phase_ = phases_[step_];
    run_engine();
}

Player LimitGame::mover() const {
    if (finished()) return Player::Verifier;
    // The existential side of the session formula is the Verifier in the
    // convergence game and the Falsifier in the divergence game.
    const bool exists = kinds_[step_] == formula::QuantKind::Exists;
    return exists != config_.divergence ? Player::Verifier : Player::Falsifier;
}

bool LimitGame::engine_owns(Player p) const {
    switch (config_.human) {
        case HumanRole::Verifier: return p == Player::Falsifier;
        case HumanRole::Falsifier: return p == Player::Verifier;
        case HumanRole::Both: return false;
    }
    return false;
}

bool LimitGame::human_to_move() const { return !finished() && !engine_owns(mover()); }

std::string LimitGame::phase_scheme() const { return formula::scheme_of(kinds_); }

void LimitGame::play(Player who, std::string_view text) {
    if (finished()) throw move_rejected(Rejection::GameOver, "the game is over");
    if (who != mover())
        throw move_rejected(Rejection::WrongMover, "it is the " + std::string(game::to_string(mover())) + "'s move");
    if (engine_owns(who))
        throw move_rejected(Rejection::WrongMover, "the engine plays the " + std::string(game::to_string(who)));
    accept(who, parse_value(text), std::string(text), false, {});
    run_engine();
}

void LimitGame::check_value(double v) const {
    if (!std::isfinite(v)) throw move_rejected(Rejection::BadValue, "move must be a finite number");
    const auto& p = config_.problem;
    switch (phase_) {
        case Phase::ChooseA:
        case Phase::ChooseM: return;
        case Phase::ChooseEpsilon:
        case Phase::ChooseDelta:
            if (!(v > 0))
                throw move_rejected(Rejection::Nonpositive,
                                    std::string(phase_ == Phase::ChooseEpsilon ? "eps" : "delta") + " must be positive");
            return;
        case Phase::ChooseN:
            if (!is_natural(v)) throw move_rejected(Rejection::BadValue, "N must be a natural number");
            return;
        case Phase::ChooseX:
            if (p.kind == ProblemKind::FunctionLimitAtPoint) {
                if (!(v != p.x0 && std::fabs(v - p.x0) < *bound_))
                    throw move_rejected(Rejection::OutsideNeighborhood,
                                        "x must satisfy 0 < |x - " + format_number(p.x0) + "| < " + format_number(*bound_));
            } else if (!(v >= *bound_)) {
                throw move_rejected(Rejection::OutsideNeighborhood, "x must be at least M = " + format_number(*bound_));
            }
            if (!defined_at(p.expr, v))
                throw move_rejected(Rejection::BadValue, "f is undefined at x = " + format_number(v));
            return;
        case Phase::ChooseNIndex:
            if (!is_natural(v)) throw move_rejected(Rejection::BadValue, "n must be a natural number");
            if (!(v > *bound_))
                throw move_rejected(Rejection::IndexNotAboveN, "n must exceed N = " + format_number(*bound_));
            if (!defined_at(p.expr, v))
                throw move_rejected(Rejection::BadValue, "the sequence is undefined at n = " + format_number(v));
            return;
        case Phase::Verdict: throw move_rejected(Rejection::GameOver, "the game is over");
    }
}

void LimitGame::accept(Player who, double value, std::string text, bool engine, std::string note) {
    check_value(value);
    history_.push_back({phase_, who, value, std::move(text), engine, std::move(note)});
    switch (phase_) {
        case Phase::ChooseA: a_ = value; break;
        case Phase::ChooseEpsilon: eps_ = value; break;
        case Phase::ChooseDelta:
        case Phase::ChooseN:
        case Phase::ChooseM: bound_ = value; break;
        case Phase::ChooseX:
        case Phase::ChooseNIndex: point_ = value; break;
        case Phase::Verdict: break;
    }
    ++step_;
    if (step_ < phases_.size()) {
        phase_ = phases_[step_];
    } else {
        phase_ = Phase::Verdict;
        settle();
    }
}

void LimitGame::run_engine() {
    while (!finished() && engine_owns(mover())) {
        const Player who = mover();
        auto p = config_.problem;
        if (a_) p.limit = *a_;
        double value = 0;
        std::string note;
        switch (phase_) {
            case Phase::ChooseA: {
                const auto est = estimate_limit(p, *registry_);
                value = est.value_or(0.0);
                note = !est ? "no estimate, default" : registry_->find(p) ? "registry" : "sampled";
                break;
            }
            case Phase::ChooseEpsilon: {
                const auto c = choose_epsilon(p, *a_, *registry_);
                value = c.epsilon;
                note = c.basis;
                break;
            }
            case Phase::ChooseDelta: {
                try {
                    value = closed_form_delta(p, *eps_, *registry_);
                    note = "closed form";
                } catch (const unregistered_problem&) {
                    const auto s = find_delta(p, *eps_);
                    value = s.delta;
                    note = s.status == VerdictKind::Proved ? "certified by subdivision" : "uncertified";
                }
                break;
            }
            case Phase::ChooseN: {
                const auto t = find_N(p, *eps_, *registry_);
                value = t.value.value_or(1e7);
                note = t.value ? std::string(to_string(t.basis)) : "no threshold found";
                break;
            }
            case Phase::ChooseM: {
                const auto t = find_M(p, *eps_, *registry_);
                value = t.value.value_or(1e15);
                note = t.value ? std::string(to_string(t.basis)) : "no threshold found";
                break;
            }
            case Phase::ChooseX:
            case Phase::ChooseNIndex: {
                if (const auto w = find_witness(p, *a_, *eps_, *bound_)) {
                    value = w->x;
                    note = "witness";
                    break;
                }
                note = "no witness found";
                if (p.kind == ProblemKind::SequenceLimit) {
                    value = std::floor(*bound_) + 1;
                    while (!defined_at(p.expr, value)) ++value;
                } else if (p.kind == ProblemKind::FunctionLimitAtInfinity) {
                    value = *bound_;
                    while (!defined_at(p.expr, value)) value = value * 2 + 1;
                } else {
                    // any defined point of the punctured neighbourhood
                    for (double h = *bound_ / 2; h > 0; h /= 2) {
                        if (defined_at(p.expr, p.x0 + h)) { value = p.x0 + h; break; }
                        if (defined_at(p.expr, p.x0 - h)) { value = p.x0 - h; break; }
                    }
                }
                break;
            }
            case Phase::Verdict: return;
        }
        accept(who, value, format_number(value), true, note);
    }
}

void LimitGame::settle() {
    const auto& p = config_.problem;
    const double at = *point_;
    const double fx = eval_point(p.expr, at);

    formula::Valuation v;
    v.variable = [&](const std::string& name) -> double {
        if (name == "a") return *a_;
        if (name == "eps") return *eps_;
        if (name == "delta" || name == "N" || name == "M") return *bound_;
        if (name == "x" || name == "n") return at;
        if (name == "x0") return p.x0;
        throw std::logic_error("unbound symbol " + name);
    };
    v.function = [&](const std::string&, std::span<const double> args) { return eval_point(p.expr, args[0]); };
    const bool matrix = formula::evaluate(formula_.matrix, v);

    LimitOutcome o;
    o.value = fx;
    o.distance = std::fabs(fx - *a_);
    o.inequality_holds = o.distance < *eps_;
    // the existential player of the session formula wins iff its matrix holds
    o.winner = matrix != config_.divergence ? Player::Verifier : Player::Falsifier;
    const std::string arg = p.kind == ProblemKind::SequenceLimit ? "a_" + display(at) : "f(" + display(at) + ")";
    o.text = "|" + arg + " - " + display(*a_) + "| = " + display(o.distance) + (o.inequality_holds ? " < " : " >= ") +
             display(*eps_);
    outcome_ = o;
}

}  // namespace qarena::limits
