#pragma once

// Memo-free reference for the bounded AND-OR solver, plus a checker that
// plays a strategy map against every Falsifier reply.

#include <map>
#include <optional>
#include <string>

#include "qarena/game.hpp"

namespace oracle {

using qarena::game::Outcome;
using qarena::game::Player;

template <class G>
bool naive_wins(const G& g, const typename G::Position& p, int remaining) {
    const auto t = g.terminal(p);
    if (t == Outcome::VerifierWin) return true;
    if (t == Outcome::NotWin) return false;
    const auto moves = g.moves(p);
    if (g.turn(p) == Player::Verifier) {
        if (remaining == 0) return false;
        for (const auto& m : moves)
            if (naive_wins(g, g.apply(p, m), remaining - 1)) return true;
        return false;
    }
    if (moves.empty()) return false;
    for (const auto& m : moves)
        if (!naive_wins(g, g.apply(p, m), remaining)) return false;
    return true;
}

template <class G>
std::optional<int> naive_min_depth(const G& g, const typename G::Position& p, int limit) {
    for (int d = 0; d <= limit; ++d)
        if (naive_wins(g, p, d)) return d;
    return std::nullopt;
}

/// True when following `strategy` at Verifier nodes reaches a VerifierWin
/// within `budget` Verifier moves whatever the Falsifier does.
template <class G>
bool strategy_wins(const G& g, const typename G::Position& p,
                   const std::map<std::string, std::string>& strategy, int budget) {
    const auto t = g.terminal(p);
    if (t == Outcome::VerifierWin) return true;
    if (t == Outcome::NotWin) return false;
    if (g.turn(p) == Player::Verifier) {
        if (budget == 0) return false;
        auto it = strategy.find(std::string(g.key(p)));
        if (it == strategy.end()) return false;
        for (const auto& m : g.moves(p))
            if (g.move_text(p, m) == it->second) return strategy_wins(g, g.apply(p, m), strategy, budget - 1);
        return false;
    }
    const auto moves = g.moves(p);
    if (moves.empty()) return false;
    for (const auto& m : moves)
        if (!strategy_wins(g, g.apply(p, m), strategy, budget)) return false;
    return true;
}

}  // namespace oracle
