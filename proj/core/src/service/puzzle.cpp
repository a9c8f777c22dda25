#include "qarena/puzzle.hpp"

#include <stdexcept>

#include "qarena/bachet.hpp"
#include "qarena/chess.hpp"
#include "qarena/mate_game.hpp"

namespace qarena::puzzle {

namespace {

void validate(const PuzzleRequest& r) {
    if (r.fen.has_value() == r.tokens.has_value()) throw std::invalid_argument("give exactly one of fen or tokens");
    if (r.depth < 1) throw std::invalid_argument("depth must be at least 1");
    if (r.tokens && (*r.tokens < 0 || *r.tokens > 10000))
        throw std::invalid_argument("tokens must be between 0 and 10000");
}

template <class G>
PuzzleSolution solve_with(const G& game, const typename G::Position& root, const PuzzleRequest& r) {
    PuzzleSolution s;
    s.result = game::solve(game, root, r.depth, {r.node_budget});
    for (const auto& m : game.moves(root)) {
        const auto text = game.move_text(root, m);
        for (const auto& w : s.result.winning_moves)
            if (w == text) s.winning.push_back({text, game.move_label(root, m)});
    }
    return s;
}

template <class G>
std::string graph_with(const G& game, const typename G::Position& root, const PuzzleRequest& r,
                       game::GraphFormat format) {
    const auto result = game::solve(game, root, r.depth, {r.node_budget});
    game::GraphOptions options;
    options.show_refutations = r.refutations;
    options.root_move = r.key;
    return game::export_graph(game::strategy_graph(result, game, root, options), format);
}

}  // namespace

PuzzleSolution solve_puzzle(const PuzzleRequest& r) {
    validate(r);
    if (r.fen) {
        const auto root = chess::parse_fen(*r.fen);
        auto s = solve_with(chess::MateGame::for_position(root), root, r);
        if (!s.result.forced)
            s.summary = "no mate in " + std::to_string(r.depth);
        else if (s.winning.empty())
            s.summary = "already checkmate";
        else
            s.summary = "mate in " + std::to_string(*s.result.minimal_depth) + ": " + s.winning.front().label;
        return s;
    }
    const bachet::BachetState root{*r.tokens, game::Player::Verifier};
    auto s = solve_with(bachet::BachetGame{}, root, r);
    if (!s.result.forced)
        s.summary = "no forced win from " + std::to_string(*r.tokens) + " tokens";
    else if (s.winning.empty())
        s.summary = "already won";
    else
        s.summary = "win in " + std::to_string(*s.result.minimal_depth) + ": " + s.winning.front().label;
    return s;
}

std::string puzzle_graph(const PuzzleRequest& r, game::GraphFormat format) {
    validate(r);
    if (r.fen) {
        const auto root = chess::parse_fen(*r.fen);
        return graph_with(chess::MateGame::for_position(root), root, r, format);
    }
    return graph_with(bachet::BachetGame{}, bachet::BachetState{*r.tokens, game::Player::Verifier}, r, format);
}

}  // namespace qarena::puzzle
