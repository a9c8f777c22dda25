#pragma once

// Bachet's game: players alternately remove 1..3 tokens; whoever takes the
// last token wins. The Verifier moves first.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qarena/game.hpp"

namespace qarena::bachet {

inline constexpr int kMaxRemoval = 3;

struct BachetState {
    int tokens = 0;
    game::Player to_move = game::Player::Verifier;

    friend bool operator==(const BachetState&, const BachetState&) = default;
};

class invalid_removal : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Allowed removal counts in increasing order; empty iff no tokens remain.
std::vector<int> bachet_moves(const BachetState& s);

BachetState bachet_apply(const BachetState& s, int removal);

/// A position without tokens is won by the player who just moved.
game::Outcome bachet_status(const BachetState& s);

/// Counts that are lost for the player to move (multiples of kMaxRemoval + 1).
bool is_losing_count(int tokens);

/// Closed-form move: leave a multiple of 4 when possible, otherwise take a
/// single token. nullopt only when nothing can be removed.
std::optional<int> bachet_strategy(const BachetState& s);

class BachetGame {
public:
    using Position = BachetState;
    using Move = int;

    static constexpr bool verifier_wins_only_by_moving = true;

    game::Player turn(const Position& p) const { return p.to_move; }
    std::vector<Move> moves(const Position& p) const { return bachet_moves(p); }
    Position apply(const Position& p, Move m) const { return bachet_apply(p, m); }
    game::Outcome terminal(const Position& p) const { return bachet_status(p); }
    std::string key(const Position& p) const;
    std::string move_text(const Position&, Move m) const { return std::to_string(m); }
    std::string move_label(const Position&, Move m) const { return "remove " + std::to_string(m); }
    std::string position_label(const Position& p) const { return std::to_string(p.tokens); }
};

static_assert(game::GameAdapter<BachetGame>);

}  // namespace qarena::bachet
