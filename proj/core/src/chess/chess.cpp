#include "qarena/chess.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <sstream>

namespace qarena::chess {

// Raw board codes: 0 = empty, otherwise 1 + type + 8 * color.
struct Board {
    static std::array<std::uint8_t, 64>& raw(Position& p) { return p.board_; }
    static const std::array<std::uint8_t, 64>& raw(const Position& p) { return p.board_; }
};

namespace {

constexpr std::uint8_t code(Color c, PieceType t) {
    return static_cast<std::uint8_t>(1 + static_cast<int>(t) + 8 * static_cast<int>(c));
}
constexpr Color color_of(std::uint8_t c) { return c >= 8 ? Color::Black : Color::White; }
constexpr PieceType type_of(std::uint8_t c) { return static_cast<PieceType>((c & 7) - 1); }

constexpr int kKnight[8][2] = {{1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}};
constexpr int kKing[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
constexpr int kDiag[4][2] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
constexpr int kOrtho[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

constexpr bool on_board(int f, int r) { return f >= 0 && f < 8 && r >= 0 && r < 8; }

char piece_letter(PieceType t) {
    constexpr char letters[] = {'P', 'N', 'B', 'R', 'Q', 'K'};
    return letters[static_cast<int>(t)];
}

// Sort key reproducing lexicographic order of coordinate text.
int coordinate_key(const Move& m) {
    const int from = file_of(m.from) * 8 + rank_of(m.from);
    const int to = file_of(m.to) * 8 + rank_of(m.to);
    int promo = 0;
    if (m.promotion) {
        switch (*m.promotion) {
            case PieceType::Bishop: promo = 1; break;
            case PieceType::Knight: promo = 2; break;
            case PieceType::Queen: promo = 3; break;
            default: promo = 4; break;
        }
    }
    return (from * 64 + to) * 5 + promo;
}

void sort_moves(std::vector<Move>& moves) {
    std::sort(moves.begin(), moves.end(),
              [](const Move& a, const Move& b) { return coordinate_key(a) < coordinate_key(b); });
}

void add_pawn_move(std::vector<Move>& out, Square from, Square to, std::uint8_t flags, bool promote) {
    if (!promote) {
        out.push_back({from, to, std::nullopt, flags});
        return;
    }
    for (auto t : {PieceType::Queen, PieceType::Rook, PieceType::Bishop, PieceType::Knight})
        out.push_back({from, to, t, flags});
}

void pseudo_moves(const Position& p, std::vector<Move>& out, bool castling) {
    const auto& b = Board::raw(p);
    const Color us = p.side_to_move();
    for (Square s = 0; s < 64; ++s) {
        const auto c = b[s];
        if (c == 0 || color_of(c) != us) continue;
        const int f = file_of(s), r = rank_of(s);
        const auto target_ok = [&](int tf, int tr, std::uint8_t& flags) {
            const auto t = b[make_square(tf, tr)];
            if (t == 0) {
                flags = 0;
                return true;
            }
            if (color_of(t) == us) return false;
            flags = Move::Capture;
            return true;
        };
        switch (type_of(c)) {
            case PieceType::Pawn: {
                const int dir = us == Color::White ? 1 : -1;
                const int start = us == Color::White ? 1 : 6;
                const int last = us == Color::White ? 7 : 0;
                const int r1 = r + dir;
                if (!on_board(f, r1)) break;
                if (b[make_square(f, r1)] == 0) {
                    add_pawn_move(out, s, make_square(f, r1), 0, r1 == last);
                    if (r == start && b[make_square(f, r1 + dir)] == 0)
                        out.push_back({s, make_square(f, r1 + dir), std::nullopt, Move::DoublePush});
                }
                for (int df : {-1, 1}) {
                    const int tf = f + df;
                    if (!on_board(tf, r1)) continue;
                    const Square to = make_square(tf, r1);
                    const auto t = b[to];
                    if (t != 0 && color_of(t) != us)
                        add_pawn_move(out, s, to, Move::Capture, r1 == last);
                    else if (t == 0 && p.en_passant() == to)
                        out.push_back({s, to, std::nullopt, Move::Capture | Move::EnPassant});
                }
                break;
            }
            case PieceType::Knight:
                for (const auto& d : kKnight) {
                    std::uint8_t flags;
                    if (on_board(f + d[0], r + d[1]) && target_ok(f + d[0], r + d[1], flags))
                        out.push_back({s, make_square(f + d[0], r + d[1]), std::nullopt, flags});
                }
                break;
            case PieceType::King:
                for (const auto& d : kKing) {
                    std::uint8_t flags;
                    if (on_board(f + d[0], r + d[1]) && target_ok(f + d[0], r + d[1], flags))
                        out.push_back({s, make_square(f + d[0], r + d[1]), std::nullopt, flags});
                }
                break;
            default: {
                const bool diag = type_of(c) != PieceType::Rook;
                const bool ortho = type_of(c) != PieceType::Bishop;
                const auto slide = [&](const int (*dirs)[2]) {
                    for (int i = 0; i < 4; ++i) {
                        int tf = f + dirs[i][0], tr = r + dirs[i][1];
                        while (on_board(tf, tr)) {
                            std::uint8_t flags;
                            if (!target_ok(tf, tr, flags)) break;
                            out.push_back({s, make_square(tf, tr), std::nullopt, flags});
                            if (flags) break;
                            tf += dirs[i][0];
                            tr += dirs[i][1];
                        }
                    }
                };
                if (diag) slide(kDiag);
                if (ortho) slide(kOrtho);
                break;
            }
        }
    }
    if (!castling) return;
    const Color them = ~us;
    const int home = us == Color::White ? 0 : 7;
    const Square king = make_square(4, home);
    if (b[king] != code(us, PieceType::King)) return;
    const bool king_side = us == Color::White ? p.castling().white_king : p.castling().black_king;
    const bool queen_side = us == Color::White ? p.castling().white_queen : p.castling().black_queen;
    if (!king_side && !queen_side) return;
    if (is_attacked(p, king, them)) return;
    if (king_side && b[make_square(7, home)] == code(us, PieceType::Rook) &&
        b[make_square(5, home)] == 0 && b[make_square(6, home)] == 0 &&
        !is_attacked(p, make_square(5, home), them) && !is_attacked(p, make_square(6, home), them))
        out.push_back({king, make_square(6, home), std::nullopt, Move::Castle});
    if (queen_side && b[make_square(0, home)] == code(us, PieceType::Rook) &&
        b[make_square(3, home)] == 0 && b[make_square(2, home)] == 0 &&
        b[make_square(1, home)] == 0 && !is_attacked(p, make_square(3, home), them) &&
        !is_attacked(p, make_square(2, home), them))
        out.push_back({king, make_square(2, home), std::nullopt, Move::Castle});
}

void clear_rights_for(CastlingRights& cr, Square s) {
    if (s == make_square(4, 0)) cr.white_king = cr.white_queen = false;
    if (s == make_square(4, 7)) cr.black_king = cr.black_queen = false;
    if (s == make_square(7, 0)) cr.white_king = false;
    if (s == make_square(0, 0)) cr.white_queen = false;
    if (s == make_square(7, 7)) cr.black_king = false;
    if (s == make_square(0, 7)) cr.black_queen = false;
}

Position make_move(const Position& p, const Move& m) {
    Position n = p;
    auto& b = Board::raw(n);
    const auto piece = b[m.from];
    const Color us = p.side_to_move();
    const bool pawn = type_of(piece) == PieceType::Pawn;
    const bool capture = b[m.to] != 0 || (m.flags & Move::EnPassant);

    if (m.flags & Move::EnPassant) b[make_square(file_of(m.to), rank_of(m.from))] = 0;
    if (m.flags & Move::Castle) {
        const int home = rank_of(m.from);
        if (file_of(m.to) == 6) {
            b[make_square(5, home)] = b[make_square(7, home)];
            b[make_square(7, home)] = 0;
        } else {
            b[make_square(3, home)] = b[make_square(0, home)];
            b[make_square(0, home)] = 0;
        }
    }
    b[m.to] = m.promotion ? code(us, *m.promotion) : piece;
    b[m.from] = 0;

    auto cr = p.castling();
    clear_rights_for(cr, m.from);
    clear_rights_for(cr, m.to);
    n.set_castling(cr);
    n.set_en_passant(pawn && std::abs(rank_of(m.to) - rank_of(m.from)) == 2
                         ? std::optional<Square>((m.from + m.to) / 2)
                         : std::nullopt);
    n.set_clocks(pawn || capture ? 0 : p.halfmove_clock() + 1,
                 p.fullmove_number() + (us == Color::Black ? 1 : 0));
    n.set_side_to_move(~us);
    return n;
}

void legal_into(const Position& p, std::vector<Move>& out) {
    std::vector<Move> pseudo;
    pseudo.reserve(64);
    pseudo_moves(p, pseudo, true);
    const Color us = p.side_to_move();
    for (const auto& m : pseudo) {
        if (!in_check(make_move(p, m), us)) out.push_back(m);
    }
}

// Attackers of s belonging to `by`, in square order.
std::vector<Square> attackers(const Position& p, Square s, Color by) {
    const auto& b = Board::raw(p);
    std::vector<Square> out;
    const int f = file_of(s), r = rank_of(s);
    const int pawn_rank = by == Color::White ? r - 1 : r + 1;
    for (int df : {-1, 1}) {
        if (on_board(f + df, pawn_rank) &&
            b[make_square(f + df, pawn_rank)] == code(by, PieceType::Pawn))
            out.push_back(make_square(f + df, pawn_rank));
    }
    for (const auto& d : kKnight) {
        if (on_board(f + d[0], r + d[1]) &&
            b[make_square(f + d[0], r + d[1])] == code(by, PieceType::Knight))
            out.push_back(make_square(f + d[0], r + d[1]));
    }
    for (const auto& d : kKing) {
        if (on_board(f + d[0], r + d[1]) &&
            b[make_square(f + d[0], r + d[1])] == code(by, PieceType::King))
            out.push_back(make_square(f + d[0], r + d[1]));
    }
    const auto ray = [&](const int (*dirs)[2], PieceType slider) {
        for (int i = 0; i < 4; ++i) {
            int tf = f + dirs[i][0], tr = r + dirs[i][1];
            while (on_board(tf, tr)) {
                const auto t = b[make_square(tf, tr)];
                if (t != 0) {
                    if (t == code(by, slider) || t == code(by, PieceType::Queen))
                        out.push_back(make_square(tf, tr));
                    break;
                }
                tf += dirs[i][0];
                tr += dirs[i][1];
            }
        }
    };
    ray(kDiag, PieceType::Bishop);
    ray(kOrtho, PieceType::Rook);
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t perft_rec(const Position& p, int depth) {
    std::vector<Move> moves;
    legal_into(p, moves);
    if (depth == 1) return moves.size();
    std::uint64_t n = 0;
    for (const auto& m : moves) n += perft_rec(make_move(p, m), depth - 1);
    return n;
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::optional<int> parse_int(const std::string& s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) return std::nullopt;
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string square_name(Square s) {
    return {static_cast<char>('a' + file_of(s)), static_cast<char>('1' + rank_of(s))};
}

std::optional<Square> parse_square(std::string_view t) {
    if (t.size() != 2 || t[0] < 'a' || t[0] > 'h' || t[1] < '1' || t[1] > '8') return std::nullopt;
    return make_square(t[0] - 'a', t[1] - '1');
}

std::string to_coordinate(const Move& m) {
    auto s = square_name(m.from) + square_name(m.to);
    if (m.promotion) s += static_cast<char>(std::tolower(piece_letter(*m.promotion)));
    return s;
}

std::optional<Piece> Position::at(Square s) const {
    const auto c = board_[s];
    if (c == 0) return std::nullopt;
    return Piece{color_of(c), type_of(c)};
}

void Position::set(Square s, std::optional<Piece> p) {
    board_[s] = p ? code(p->color, p->type) : 0;
}

std::optional<Square> Position::king_square(Color c) const {
    for (Square s = 0; s < 64; ++s)
        if (board_[s] == code(c, PieceType::King)) return s;
    return std::nullopt;
}

bool is_attacked(const Position& p, Square s, Color by) { return !attackers(p, s, by).empty(); }

bool in_check(const Position& p, Color c) {
    const auto k = p.king_square(c);
    return k && is_attacked(p, *k, ~c);
}

std::vector<Move> legal_moves(const Position& p) {
    std::vector<Move> out;
    legal_into(p, out);
    sort_moves(out);
    return out;
}

bool has_legal_move(const Position& p) {
    std::vector<Move> pseudo;
    pseudo_moves(p, pseudo, false);
    const Color us = p.side_to_move();
    // Castling is never the only escape: the king step it implies is itself legal.
    return std::any_of(pseudo.begin(), pseudo.end(),
                       [&](const Move& m) { return !in_check(make_move(p, m), us); });
}

Move parse_move(const Position& p, std::string_view text) {
    if (text.size() < 4 || text.size() > 5)
        throw illegal_move("malformed move '" + std::string(text) + "': expected e.g. e2e4 or e7e8q");
    const auto from = parse_square(text.substr(0, 2));
    const auto to = parse_square(text.substr(2, 2));
    if (!from || !to) throw illegal_move("malformed move '" + std::string(text) + "'");
    Move m{*from, *to, std::nullopt, 0};
    if (text.size() == 5) {
        switch (text[4]) {
            case 'q': m.promotion = PieceType::Queen; break;
            case 'r': m.promotion = PieceType::Rook; break;
            case 'b': m.promotion = PieceType::Bishop; break;
            case 'n': m.promotion = PieceType::Knight; break;
            default: throw illegal_move("malformed promotion piece in '" + std::string(text) + "'");
        }
    }
    for (const auto& legal : legal_moves(p))
        if (legal == m) return legal;

    const auto piece = p.at(*from);
    if (!piece) throw illegal_move("no piece on " + square_name(*from));
    if (piece->color != p.side_to_move())
        throw illegal_move("the piece on " + square_name(*from) + " does not belong to the side to move");
    std::vector<Move> pseudo;
    pseudo_moves(p, pseudo, true);
    if (std::find(pseudo.begin(), pseudo.end(), m) != pseudo.end())
        throw illegal_move(std::string(text) + " leaves the king in check");
    throw illegal_move("the piece on " + square_name(*from) + " cannot move to " + square_name(*to));
}

Position apply_move(const Position& p, const Move& m) {
    return make_move(p, parse_move(p, to_coordinate(m)));
}

Position apply_move(const Position& p, std::string_view coordinate) {
    return make_move(p, parse_move(p, coordinate));
}

Status status(const Position& p) {
    const bool check = in_check(p, p.side_to_move());
    const bool can_move = has_legal_move(p);
    if (!can_move) return check ? Status::Checkmate : Status::Stalemate;
    return check ? Status::Check : Status::Ongoing;
}

std::string_view to_string(Status s) {
    switch (s) {
        case Status::Ongoing: return "ongoing";
        case Status::Check: return "check";
        case Status::Checkmate: return "checkmate";
        case Status::Stalemate: return "stalemate";
    }
    return "ongoing";
}

std::vector<RefutedMove> refutations(const Position& p) {
    if (status(p) != Status::Checkmate)
        throw std::invalid_argument("refutations are only defined for checkmate positions");
    std::vector<Move> pseudo;
    pseudo_moves(p, pseudo, false);
    sort_moves(pseudo);
    const Color us = p.side_to_move();
    std::vector<RefutedMove> out;
    for (const auto& m : pseudo) {
        const auto child = make_move(p, m);
        const auto king = *child.king_square(us);
        const auto by = attackers(child, king, ~us);
        const auto mover = *p.at(m.from);
        const auto attacker_sq = by.front();
        const auto attacker = *child.at(attacker_sq);

        RefutedMove r{m, "", "", ""};
        if (mover.type == PieceType::Pawn) {
            if (m.is_capture()) r.label += static_cast<char>('a' + file_of(m.from));
        } else {
            r.label += piece_letter(mover.type);
        }
        if (m.is_capture()) r.label += 'x';
        r.label += square_name(m.to);
        if (m.promotion) {
            r.label += '=';
            r.label += piece_letter(*m.promotion);
        }
        r.capture = attacker.type == PieceType::Pawn
                        ? std::string(1, static_cast<char>('a' + file_of(attacker_sq))) + "x"
                        : std::string(1, piece_letter(attacker.type)) + "x";
        r.reason = r.label + " leaves the king on " + square_name(king) + " attacked by " +
                   std::string(1, piece_letter(attacker.type)) + square_name(attacker_sq);
        out.push_back(std::move(r));
    }
    return out;
}

std::uint64_t perft(const Position& p, int depth) {
    if (depth < 1) throw std::invalid_argument("perft depth must be at least 1");
    return perft_rec(p, depth);
}

std::string to_san(const Position& p, const Move& move) {
    const auto legal = legal_moves(p);
    auto it = std::find(legal.begin(), legal.end(), move);
    if (it == legal.end()) throw illegal_move(to_coordinate(move) + " is not legal here");
    const Move m = *it;
    const auto piece = *p.at(m.from);

    std::string san;
    if (m.is_castle()) {
        san = file_of(m.to) == 6 ? "O-O" : "O-O-O";
    } else if (piece.type == PieceType::Pawn) {
        if (m.is_capture()) {
            san += static_cast<char>('a' + file_of(m.from));
            san += 'x';
        }
        san += square_name(m.to);
        if (m.promotion) {
            san += '=';
            san += piece_letter(*m.promotion);
        }
    } else {
        san += piece_letter(piece.type);
        bool ambiguous = false, same_file = false, same_rank = false;
        for (const auto& o : legal) {
            if (o.to != m.to || o.from == m.from || p.at(o.from)->type != piece.type) continue;
            ambiguous = true;
            if (file_of(o.from) == file_of(m.from)) same_file = true;
            if (rank_of(o.from) == rank_of(m.from)) same_rank = true;
        }
        if (ambiguous) {
            if (!same_file)
                san += static_cast<char>('a' + file_of(m.from));
            else if (!same_rank)
                san += static_cast<char>('1' + rank_of(m.from));
            else
                san += square_name(m.from);
        }
        if (m.is_capture()) san += 'x';
        san += square_name(m.to);
    }
    const auto next = make_move(p, m);
    if (in_check(next, next.side_to_move())) san += has_legal_move(next) ? "+" : "#";
    return san;
}

// ---------------------------------------------------------------------------
// FEN

Position parse_fen(std::string_view text) {
    using Code = fen_error::Code;
    const auto fields = split_ws(text);
    if (fields.size() != 6)
        throw fen_error(Code::FieldCount,
                        "FEN must have 6 fields, found " + std::to_string(fields.size()));
    Position p;

    int rank = 7, file = 0;
    for (char c : fields[0]) {
        if (c == '/') {
            if (file != 8 || rank == 0)
                throw fen_error(Code::Placement, "FEN placement: rank " + std::to_string(rank + 1) +
                                                     " does not describe 8 squares");
            --rank;
            file = 0;
            continue;
        }
        if (c >= '1' && c <= '8') {
            file += c - '0';
            if (file > 8) throw fen_error(Code::Placement, "FEN placement: rank overflows 8 squares");
            continue;
        }
        const auto lower = static_cast<char>(std::tolower(c));
        const char* kinds = "pnbrqk";
        const char* pos = std::strchr(kinds, lower);
        if (pos == nullptr || lower == '\0' || file >= 8)
            throw fen_error(Code::Placement, std::string("FEN placement: unexpected '") + c + "'");
        const Color color = std::isupper(static_cast<unsigned char>(c)) ? Color::White : Color::Black;
        p.set(make_square(file, rank), Piece{color, static_cast<PieceType>(pos - kinds)});
        ++file;
    }
    if (rank != 0 || file != 8)
        throw fen_error(Code::Placement, "FEN placement must describe 8 ranks of 8 squares");

    if (fields[1] == "w")
        p.set_side_to_move(Color::White);
    else if (fields[1] == "b")
        p.set_side_to_move(Color::Black);
    else
        throw fen_error(Code::SideToMove, "FEN side to move must be 'w' or 'b'");

    CastlingRights cr;
    if (fields[2] != "-") {
        std::string seen;
        for (char c : fields[2]) {
            if (std::strchr("KQkq", c) == nullptr || seen.find(c) != std::string::npos ||
                (!seen.empty() && std::string("KQkq").find(c) < std::string("KQkq").find(seen.back())))
                throw fen_error(Code::Castling, "FEN castling field '" + fields[2] + "' is malformed");
            seen += c;
        }
        cr.white_king = seen.find('K') != std::string::npos;
        cr.white_queen = seen.find('Q') != std::string::npos;
        cr.black_king = seen.find('k') != std::string::npos;
        cr.black_queen = seen.find('q') != std::string::npos;
        const auto has = [&](int f, int r, Color c, PieceType t) {
            return p.at(make_square(f, r)) == std::optional<Piece>(Piece{c, t});
        };
        if ((cr.white_king && !(has(4, 0, Color::White, PieceType::King) && has(7, 0, Color::White, PieceType::Rook))) ||
            (cr.white_queen && !(has(4, 0, Color::White, PieceType::King) && has(0, 0, Color::White, PieceType::Rook))) ||
            (cr.black_king && !(has(4, 7, Color::Black, PieceType::King) && has(7, 7, Color::Black, PieceType::Rook))) ||
            (cr.black_queen && !(has(4, 7, Color::Black, PieceType::King) && has(0, 7, Color::Black, PieceType::Rook))))
            throw fen_error(Code::Castling,
                            "FEN castling rights require king and rook on their home squares");
    }
    p.set_castling(cr);

    if (fields[3] != "-") {
        const auto sq = parse_square(fields[3]);
        if (!sq) throw fen_error(Code::EnPassant, "FEN en-passant field '" + fields[3] + "' is malformed");
        const bool white = p.side_to_move() == Color::White;
        const int r = rank_of(*sq), f = file_of(*sq);
        const int pusher_rank = white ? 4 : 3;
        const int origin_rank = white ? 6 : 1;
        const Color pusher = white ? Color::Black : Color::White;
        if (r != (white ? 5 : 2) || p.at(*sq) || p.at(make_square(f, origin_rank)) ||
            p.at(make_square(f, pusher_rank)) != std::optional<Piece>(Piece{pusher, PieceType::Pawn}))
            throw fen_error(Code::EnPassant, "FEN en-passant square " + fields[3] +
                                                 " is inconsistent with a double pawn push");
        p.set_en_passant(*sq);
    }

    const auto half = parse_int(fields[4]);
    const auto full = parse_int(fields[5]);
    if (!half || !full || *full < 1)
        throw fen_error(Code::Clock, "FEN move counters must be non-negative integers (fullmove >= 1)");
    p.set_clocks(*half, *full);

    for (Color c : {Color::White, Color::Black}) {
        int kings = 0;
        for (Square s = 0; s < 64; ++s)
            if (p.at(s) == std::optional<Piece>(Piece{c, PieceType::King})) ++kings;
        if (kings != 1)
            throw fen_error(Code::KingCount, std::string(c == Color::White ? "white" : "black") +
                                                 " must have exactly one king, found " +
                                                 std::to_string(kings));
    }
    for (int f = 0; f < 8; ++f) {
        for (int r : {0, 7}) {
            const auto pc = p.at(make_square(f, r));
            if (pc && pc->type == PieceType::Pawn)
                throw fen_error(Code::PawnOnBackRank, "pawn on " + square_name(make_square(f, r)));
        }
    }
    if (in_check(p, ~p.side_to_move()))
        throw fen_error(Code::OpponentInCheck, "the side not to move is in check");
    return p;
}

std::string render_fen(const Position& p) {
    std::string out;
    for (int r = 7; r >= 0; --r) {
        int empty = 0;
        for (int f = 0; f < 8; ++f) {
            const auto pc = p.at(make_square(f, r));
            if (!pc) {
                ++empty;
                continue;
            }
            if (empty) out += static_cast<char>('0' + empty);
            empty = 0;
            const char letter = piece_letter(pc->type);
            out += pc->color == Color::White ? letter : static_cast<char>(std::tolower(letter));
        }
        if (empty) out += static_cast<char>('0' + empty);
        if (r) out += '/';
    }
    out += p.side_to_move() == Color::White ? " w " : " b ";
    const auto& cr = p.castling();
    std::string c;
    if (cr.white_king) c += 'K';
    if (cr.white_queen) c += 'Q';
    if (cr.black_king) c += 'k';
    if (cr.black_queen) c += 'q';
    out += c.empty() ? "-" : c;
    out += ' ';
    out += p.en_passant() ? square_name(*p.en_passant()) : "-";
    out += ' ' + std::to_string(p.halfmove_clock()) + ' ' + std::to_string(p.fullmove_number());
    return out;
}

std::string position_key(const Position& p) {
    auto fen = render_fen(p);
    // drop the two move counters
    for (int i = 0; i < 2; ++i) fen.erase(fen.find_last_of(' '));
    return fen;
}

}  // namespace qarena::chess
