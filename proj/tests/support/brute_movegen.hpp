#pragma once

// Independent, deliberately naive chess move generator used as a perft
// oracle. Shares no code with qarena::chess: the board is a 64-char string,
// legality is tested by letting the opponent try to capture the king.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

struct BruteState {
    std::string board;  // 64 chars, index = rank * 8 + file, '.' empty
    bool white = true;
    std::string castling = "-";
    int ep = -1;
};

BruteState from_fen(std::string_view fen);

/// Legal moves as coordinate strings (order unspecified).
std::vector<std::string> brute_legal(const BruteState& s);
BruteState brute_apply(const BruteState& s, const std::string& move);
std::uint64_t brute_perft(const BruteState& s, int depth);

}  // namespace oracle
