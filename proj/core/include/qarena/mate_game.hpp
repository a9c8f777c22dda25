#pragma once

// Mate-in-k as a Verifier/Falsifier game: the Verifier is the side that
// must deliver checkmate, the Falsifier defends.

#include <string>
#include <vector>

#include "qarena/chess.hpp"
#include "qarena/game.hpp"

namespace qarena::chess {

class MateGame {
public:
    using Position = chess::Position;
    using Move = chess::Move;

    static constexpr bool verifier_wins_only_by_moving = true;

    explicit MateGame(Color attacker = Color::White) : attacker_(attacker) {}

    /// Attacker is the side to move in `root`.
    static MateGame for_position(const Position& root) { return MateGame(root.side_to_move()); }

    Color attacker() const { return attacker_; }

    game::Player turn(const Position& p) const {
        return p.side_to_move() == attacker_ ? game::Player::Verifier : game::Player::Falsifier;
    }
    std::vector<Move> moves(const Position& p) const { return legal_moves(p); }
    Position apply(const Position& p, const Move& m) const { return chess::apply_move(p, m); }

    game::Outcome terminal(const Position& p) const {
        if (has_legal_move(p)) return game::Outcome::Nonterminal;
        if (in_check(p, p.side_to_move()) && p.side_to_move() != attacker_)
            return game::Outcome::VerifierWin;
        return game::Outcome::NotWin;
    }

    std::string key(const Position& p) const { return position_key(p); }
    std::string move_text(const Position&, const Move& m) const { return to_coordinate(m); }
    std::string move_label(const Position& p, const Move& m) const { return to_san(p, m); }
    std::string position_label(const Position& p) const { return render_fen(p); }

    std::vector<game::Refutation> refutations(const Position& p) const {
        std::vector<game::Refutation> out;
        for (auto& r : chess::refutations(p)) out.push_back({r.label, r.capture, r.reason});
        return out;
    }

private:
    Color attacker_;
};

static_assert(game::RefutingAdapter<MateGame>);

}  // namespace qarena::chess
