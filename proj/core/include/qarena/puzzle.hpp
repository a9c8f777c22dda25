#pragma once

// One-shot solving of a chess or Bachet position, shared by the command
// line and the HTTP API so both render identical graphs.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qarena/game.hpp"

namespace qarena::puzzle {

struct PuzzleRequest {
    std::optional<std::string> fen;  // exactly one of fen / tokens
    std::optional<int> tokens;
    int depth = 1;
    bool refutations = false;
    std::optional<std::string> key;  // pin the root move of the graph
    std::size_t node_budget = 20'000'000;
};

struct WinningMove {
    std::string move;   // canonical text: "a6a8" or "2"
    std::string label;  // "Ra8#" or "remove 2"
};

struct PuzzleSolution {
    game::SolveResult result;
    std::vector<WinningMove> winning;
    /// "mate in 1: Ra8#", "no mate in 1", "win: remove 2", ...
    std::string summary;
};

/// Throws std::invalid_argument for a malformed request (bad FEN, token
/// count, depth) and game::budget_exceeded.
PuzzleSolution solve_puzzle(const PuzzleRequest& request);

/// Strategy graph as DOT or JSON. Throws game::not_forced_error when there
/// is no forced win within the depth.
std::string puzzle_graph(const PuzzleRequest& request, game::GraphFormat format);

}  // namespace qarena::puzzle
