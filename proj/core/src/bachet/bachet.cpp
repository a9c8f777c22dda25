#include "qarena/bachet.hpp"

#include <algorithm>

namespace qarena::bachet {

std::vector<int> bachet_moves(const BachetState& s) {
    std::vector<int> out;
    for (int r = 1; r <= std::min(kMaxRemoval, s.tokens); ++r) out.push_back(r);
    return out;
}

BachetState bachet_apply(const BachetState& s, int removal) {
    if (removal < 1 || removal > kMaxRemoval)
        throw invalid_removal("removal must be between 1 and " + std::to_string(kMaxRemoval));
    if (removal > s.tokens)
        throw invalid_removal("cannot remove " + std::to_string(removal) + " tokens, only " +
                              std::to_string(s.tokens) + " left");
    return {s.tokens - removal, game::opponent(s.to_move)};
}

game::Outcome bachet_status(const BachetState& s) {
    if (s.tokens > 0) return game::Outcome::Nonterminal;
    return s.to_move == game::Player::Falsifier ? game::Outcome::VerifierWin : game::Outcome::NotWin;
}

bool is_losing_count(int tokens) { return tokens % (kMaxRemoval + 1) == 0; }

std::optional<int> bachet_strategy(const BachetState& s) {
    if (s.tokens <= 0) return std::nullopt;
    const int r = s.tokens % (kMaxRemoval + 1);
    return r == 0 ? 1 : r;
}

std::string BachetGame::key(const Position& p) const {
    return std::to_string(p.tokens) + (p.to_move == game::Player::Verifier ? "V" : "F");
}

}  // namespace qarena::bachet
