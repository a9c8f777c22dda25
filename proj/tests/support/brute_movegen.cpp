#include "brute_movegen.hpp"

#include <cctype>
#include <sstream>

namespace oracle {

namespace {

bool is_white(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool mine(char c, bool white) { return c != '.' && is_white(c) == white; }
bool theirs(char c, bool white) { return c != '.' && is_white(c) != white; }

std::string sq(int f, int r) { return {static_cast<char>('a' + f), static_cast<char>('1' + r)}; }

struct Raw {
    int from, to;
    char promo;
};

// Target squares `white` pieces attack (pawn diagonals only).
std::vector<int> attacked_by(const std::string& b, bool white) {
    std::vector<int> out;
    for (int i = 0; i < 64; ++i) {
        char c = b[i];
        if (!mine(c, white)) continue;
        int f = i % 8, r = i / 8;
        char t = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        auto add = [&](int df, int dr) {
            int nf = f + df, nr = r + dr;
            if (nf >= 0 && nf < 8 && nr >= 0 && nr < 8) out.push_back(nr * 8 + nf);
        };
        if (t == 'p') {
            add(-1, white ? 1 : -1);
            add(1, white ? 1 : -1);
        } else if (t == 'n') {
            for (auto [a, d] : {std::pair{1, 2}, {2, 1}, {-1, 2}, {-2, 1}, {1, -2}, {2, -1}, {-1, -2}, {-2, -1}})
                add(a, d);
        } else if (t == 'k') {
            for (int a = -1; a <= 1; ++a)
                for (int d = -1; d <= 1; ++d)
                    if (a || d) add(a, d);
        } else {
            for (int a = -1; a <= 1; ++a) {
                for (int d = -1; d <= 1; ++d) {
                    if (!a && !d) continue;
                    bool diag = a && d;
                    if (diag && t == 'r') continue;
                    if (!diag && t == 'b') continue;
                    int nf = f + a, nr = r + d;
                    while (nf >= 0 && nf < 8 && nr >= 0 && nr < 8) {
                        out.push_back(nr * 8 + nf);
                        if (b[nr * 8 + nf] != '.') break;
                        nf += a;
                        nr += d;
                    }
                }
            }
        }
    }
    return out;
}

bool square_attacked(const std::string& b, int s, bool by_white) {
    for (int t : attacked_by(b, by_white))
        if (t == s) return true;
    return false;
}

std::vector<Raw> pseudo(const BruteState& s) {
    std::vector<Raw> out;
    const auto& b = s.board;
    for (int i = 0; i < 64; ++i) {
        char c = b[i];
        if (!mine(c, s.white)) continue;
        int f = i % 8, r = i / 8;
        char t = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (t == 'p') {
            int dr = s.white ? 1 : -1;
            int nr = r + dr;
            auto push = [&](int to) {
                if (nr == 7 || nr == 0) {
                    for (char pc : std::string("qrbn")) out.push_back({i, to, pc});
                } else {
                    out.push_back({i, to, 0});
                }
            };
            if (nr < 0 || nr > 7) continue;
            if (b[nr * 8 + f] == '.') {
                push(nr * 8 + f);
                int start = s.white ? 1 : 6;
                if (r == start && b[(nr + dr) * 8 + f] == '.') out.push_back({i, (nr + dr) * 8 + f, 0});
            }
            for (int df : {-1, 1}) {
                int nf = f + df;
                if (nf < 0 || nf > 7) continue;
                int to = nr * 8 + nf;
                if (theirs(b[to], s.white) || to == s.ep) push(to);
            }
            continue;
        }
        // non-pawns: attack geometry of this piece alone, other pieces as neutral blockers
        std::string probe(64, '.');
        for (int k = 0; k < 64; ++k) probe[k] = b[k] == '.' ? '.' : '#';
        probe[i] = s.white ? c : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        for (int to : attacked_by(probe, true)) {
            if (!mine(b[to], s.white)) out.push_back({i, to, 0});
        }
    }
    // castling
    int home = s.white ? 0 : 7;
    char k = s.white ? 'K' : 'k', q = s.white ? 'Q' : 'q';
    char rook = s.white ? 'R' : 'r', king = s.white ? 'K' : 'k';
    if (b[home * 8 + 4] == king && !square_attacked(b, home * 8 + 4, !s.white)) {
        if (s.castling.find(k) != std::string::npos && b[home * 8 + 7] == rook &&
            b[home * 8 + 5] == '.' && b[home * 8 + 6] == '.' &&
            !square_attacked(b, home * 8 + 5, !s.white) && !square_attacked(b, home * 8 + 6, !s.white))
            out.push_back({home * 8 + 4, home * 8 + 6, 'c'});
        if (s.castling.find(q) != std::string::npos && b[home * 8 + 0] == rook &&
            b[home * 8 + 1] == '.' && b[home * 8 + 2] == '.' && b[home * 8 + 3] == '.' &&
            !square_attacked(b, home * 8 + 3, !s.white) && !square_attacked(b, home * 8 + 2, !s.white))
            out.push_back({home * 8 + 4, home * 8 + 2, 'c'});
    }
    return out;
}

BruteState play(const BruteState& s, const Raw& m) {
    BruteState n = s;
    auto& b = n.board;
    char c = b[m.from];
    char t = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == 'p' && m.to == s.ep) b[(m.from / 8) * 8 + m.to % 8] = '.';
    if (m.promo == 'c') {
        int home = m.from / 8;
        if (m.to % 8 == 6) {
            b[home * 8 + 5] = b[home * 8 + 7];
            b[home * 8 + 7] = '.';
        } else {
            b[home * 8 + 3] = b[home * 8 + 0];
            b[home * 8 + 0] = '.';
        }
    }
    b[m.to] = c;
    b[m.from] = '.';
    if (m.promo && m.promo != 'c')
        b[m.to] = s.white ? static_cast<char>(std::toupper(static_cast<unsigned char>(m.promo))) : m.promo;
    n.ep = (t == 'p' && (m.to - m.from == 16 || m.from - m.to == 16)) ? (m.from + m.to) / 2 : -1;
    auto drop = [&](char r) {
        auto pos = n.castling.find(r);
        if (pos != std::string::npos) n.castling.erase(pos, 1);
    };
    for (int sqr : {m.from, m.to}) {
        if (sqr == 4) { drop('K'); drop('Q'); }
        if (sqr == 60) { drop('k'); drop('q'); }
        if (sqr == 7) drop('K');
        if (sqr == 0) drop('Q');
        if (sqr == 63) drop('k');
        if (sqr == 56) drop('q');
    }
    n.white = !s.white;
    return n;
}

bool legal_after(const BruteState& after) {
    // the side that just moved is !after.white; its king must not be capturable
    char king = after.white ? 'k' : 'K';
    for (const auto& m : pseudo(after))
        if (m.promo != 'c' && after.board[m.to] == king) return false;
    return true;
}

std::string text_of(const Raw& m) {
    std::string s = sq(m.from % 8, m.from / 8) + sq(m.to % 8, m.to / 8);
    if (m.promo && m.promo != 'c') s += m.promo;
    return s;
}

}  // namespace

BruteState from_fen(std::string_view fen) {
    std::istringstream in{std::string(fen)};
    std::string placement, side, castling, ep;
    in >> placement >> side >> castling >> ep;
    BruteState s;
    s.board.assign(64, '.');
    int r = 7, f = 0;
    for (char c : placement) {
        if (c == '/') {
            --r;
            f = 0;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            f += c - '0';
        } else {
            s.board[r * 8 + f++] = c;
        }
    }
    s.white = side == "w";
    s.castling = castling;
    s.ep = ep == "-" ? -1 : (ep[1] - '1') * 8 + (ep[0] - 'a');
    return s;
}

std::vector<std::string> brute_legal(const BruteState& s) {
    std::vector<std::string> out;
    for (const auto& m : pseudo(s))
        if (legal_after(play(s, m))) out.push_back(text_of(m));
    return out;
}

BruteState brute_apply(const BruteState& s, const std::string& move) {
    for (const auto& m : pseudo(s))
        if (text_of(m) == move) return play(s, m);
    return s;
}

std::uint64_t brute_perft(const BruteState& s, int depth) {
    std::uint64_t n = 0;
    for (const auto& m : pseudo(s)) {
        auto next = play(s, m);
        if (!legal_after(next)) continue;
        n += depth == 1 ? 1 : brute_perft(next, depth - 1);
    }
    return n;
}

}  // namespace oracle
