#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qarena::chess {

enum class Color : std::uint8_t { White, Black };
enum class PieceType : std::uint8_t { Pawn, Knight, Bishop, Rook, Queen, King };

constexpr Color operator~(Color c) { return c == Color::White ? Color::Black : Color::White; }

struct Piece {
    Color color;
    PieceType type;

    friend bool operator==(const Piece&, const Piece&) = default;
};

/// 0..63 with a1 = 0, b1 = 1, ..., h8 = 63.
using Square = int;

constexpr int file_of(Square s) { return s & 7; }
constexpr int rank_of(Square s) { return s >> 3; }
constexpr Square make_square(int file, int rank) { return rank * 8 + file; }

std::string square_name(Square s);
std::optional<Square> parse_square(std::string_view text);

struct Move {
    enum Flag : std::uint8_t { Capture = 1, Castle = 2, EnPassant = 4, DoublePush = 8 };

    Square from = 0;
    Square to = 0;
    std::optional<PieceType> promotion;
    std::uint8_t flags = 0;

    bool is_capture() const { return flags & Capture; }
    bool is_castle() const { return flags & Castle; }
    bool is_en_passant() const { return flags & EnPassant; }

    /// Flags are derived from the position, so they do not take part in equality.
    friend bool operator==(const Move& a, const Move& b) {
        return a.from == b.from && a.to == b.to && a.promotion == b.promotion;
    }
};

/// Coordinate notation: "a6a8", "e7e8q".
std::string to_coordinate(const Move& m);

struct CastlingRights {
    bool white_king = false;
    bool white_queen = false;
    bool black_king = false;
    bool black_queen = false;

    friend bool operator==(const CastlingRights&, const CastlingRights&) = default;
};

class Position {
public:
    /// Empty board, white to move. Use parse_fen for real positions.
    Position() { board_.fill(0); }

    std::optional<Piece> at(Square s) const;
    void set(Square s, std::optional<Piece> p);

    Color side_to_move() const { return side_; }
    const CastlingRights& castling() const { return castling_; }
    std::optional<Square> en_passant() const { return ep_; }
    int halfmove_clock() const { return halfmove_; }
    int fullmove_number() const { return fullmove_; }

    void set_side_to_move(Color c) { side_ = c; }
    void set_castling(CastlingRights c) { castling_ = c; }
    void set_en_passant(std::optional<Square> s) { ep_ = s; }
    void set_clocks(int halfmove, int fullmove) {
        halfmove_ = halfmove;
        fullmove_ = fullmove;
    }

    std::optional<Square> king_square(Color c) const;

    friend bool operator==(const Position&, const Position&) = default;

private:
    friend struct Board;
    std::array<std::uint8_t, 64> board_{};
    Color side_ = Color::White;
    CastlingRights castling_;
    std::optional<Square> ep_;
    int halfmove_ = 0;
    int fullmove_ = 1;
};

inline constexpr std::string_view kStartFen =
    "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

class fen_error : public std::invalid_argument {
public:
    enum class Code {
        FieldCount,
        Placement,
        SideToMove,
        Castling,
        EnPassant,
        Clock,
        KingCount,
        PawnOnBackRank,
        OpponentInCheck,
    };

    fen_error(Code code, const std::string& what) : std::invalid_argument(what), code_(code) {}
    Code code() const noexcept { return code_; }

private:
    Code code_;
};

class illegal_move : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

Position parse_fen(std::string_view text);
std::string render_fen(const Position& p);

/// Placement, side, castling and en-passant fields: the identity of a
/// position for search purposes.
std::string position_key(const Position& p);

bool is_attacked(const Position& p, Square s, Color by);
bool in_check(const Position& p, Color c);

/// All legal moves, sorted by coordinate text.
std::vector<Move> legal_moves(const Position& p);
bool has_legal_move(const Position& p);

/// Applies a legal move. Throws illegal_move otherwise.
Position apply_move(const Position& p, const Move& m);
Position apply_move(const Position& p, std::string_view coordinate);

/// Resolves coordinate text against the legal moves of p.
Move parse_move(const Position& p, std::string_view coordinate);

enum class Status { Ongoing, Check, Checkmate, Stalemate };
Status status(const Position& p);
std::string_view to_string(Status s);

struct RefutedMove {
    Move move;
    std::string label;      // "Kd8"
    std::string capture;    // "Rx": the piece that would take the king
    std::string reason;
};

/// Pseudo-legal moves of a checkmated side, each of which leaves its king
/// attacked. Throws std::invalid_argument unless p is checkmate.
std::vector<RefutedMove> refutations(const Position& p);

std::uint64_t perft(const Position& p, int depth);

/// Standard algebraic notation with disambiguation and +/# suffixes.
std::string to_san(const Position& p, const Move& m);

}  // namespace qarena::chess
