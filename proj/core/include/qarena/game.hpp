#pragma once

// Alternating two-player games between a Verifier (owner of the existential
// moves) and a Falsifier (owner of the universal moves), a bounded AND-OR
// solver, and winning-strategy graphs.

#include <algorithm>
#include <climits>
#include <concepts>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qarena::game {

enum class Player { Verifier, Falsifier };
enum class Outcome { VerifierWin, NotWin, Nonterminal };

std::string_view to_string(Player p);
std::string_view to_string(Outcome o);
Player opponent(Player p);

/// A move of the losing side that is only "pseudo-legal": it is listed in a
/// strategy graph to show why it fails (the capture that would follow).
struct Refutation {
    std::string move;     // display label, e.g. "Kd8"
    std::string capture;  // what refutes it, e.g. "Rx"
    std::string reason;
};

template <class G>
concept GameAdapter = requires(const G& g, const typename G::Position& p, const typename G::Move& m) {
    { g.turn(p) } -> std::same_as<Player>;
    { g.moves(p) } -> std::same_as<std::vector<typename G::Move>>;
    { g.apply(p, m) } -> std::same_as<typename G::Position>;
    { g.terminal(p) } -> std::same_as<Outcome>;
    { g.key(p) } -> std::convertible_to<std::string>;
    { g.move_text(p, m) } -> std::convertible_to<std::string>;
    { g.move_label(p, m) } -> std::convertible_to<std::string>;
    { g.position_label(p) } -> std::convertible_to<std::string>;
};

template <class G>
concept RefutingAdapter = GameAdapter<G> && requires(const G& g, const typename G::Position& p) {
    { g.refutations(p) } -> std::same_as<std::vector<Refutation>>;
};

/// Adapters whose Falsifier can never produce a VerifierWin position by
/// moving (chess mates, last-token-wins games) let the solver prune horizon
/// Falsifier nodes without generating their moves.
template <class G>
constexpr bool verifier_wins_only_by_moving() {
    if constexpr (requires { G::verifier_wins_only_by_moving; })
        return G::verifier_wins_only_by_moving;
    else
        return false;
}

class budget_exceeded : public std::runtime_error {
public:
    explicit budget_exceeded(std::size_t nodes)
        : std::runtime_error("search budget of " + std::to_string(nodes) + " nodes exceeded"),
          nodes_(nodes) {}
    std::size_t nodes() const noexcept { return nodes_; }

private:
    std::size_t nodes_;
};

class not_forced_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SolveOptions {
    std::size_t node_budget = 20'000'000;
};

struct SolveResult {
    bool forced = false;
    int depth_limit = 0;
    /// Least number of Verifier moves that suffices (0 when the root is
    /// already won).
    std::optional<int> minimal_depth;
    /// Root moves (canonical text) that force a win within depth_limit, in
    /// the adapter's canonical move order. Empty when the Falsifier moves
    /// first or the root is already won.
    std::vector<std::string> winning_moves;
    /// Verifier-to-move position key -> chosen move text. Covers every
    /// position reachable from any winning root move against arbitrary
    /// Falsifier play.
    std::map<std::string, std::string> strategy;
    std::size_t nodes = 0;

    friend bool operator==(const SolveResult&, const SolveResult&) = default;
};

/// "∃∀" repeated k times.
std::string scheme_for_depth(int k);

template <GameAdapter G>
class Solver {
public:
    using Position = typename G::Position;
    using Move = typename G::Move;

    explicit Solver(const G& game, SolveOptions options = {}) : game_(game), options_(options) {}

    SolveResult solve(const Position& root, int k) {
        if (k < 1) throw std::invalid_argument("depth must be at least 1");
        SolveResult r;
        r.depth_limit = k;
        const auto outcome = game_.terminal(root);
        if (outcome == Outcome::VerifierWin) {
            r.forced = true;
            r.minimal_depth = 0;
            r.nodes = nodes_;
            return r;
        }
        if (outcome == Outcome::NotWin) {
            r.nodes = nodes_;
            return r;
        }
        for (int d = 0; d <= k; ++d) {
            if (wins(root, d)) {
                r.minimal_depth = d;
                break;
            }
        }
        r.forced = r.minimal_depth.has_value();
        if (r.forced) {
            if (game_.turn(root) == Player::Verifier) {
                for (const auto& m : game_.moves(root)) {
                    if (wins(game_.apply(root, m), k - 1))
                        r.winning_moves.push_back(game_.move_text(root, m));
                }
                for (const auto& m : game_.moves(root)) {
                    const auto text = game_.move_text(root, m);
                    if (std::find(r.winning_moves.begin(), r.winning_moves.end(), text) !=
                        r.winning_moves.end())
                        extract(game_.apply(root, m), k - 1, r.strategy);
                }
            }
            extract(root, k, r.strategy);
        }
        r.nodes = nodes_;
        return r;
    }

    /// Whether the Verifier can force a win within `remaining` of their moves.
    bool wins(const Position& p, int remaining) {
        if (++nodes_ > options_.node_budget) throw budget_exceeded(options_.node_budget);
        const auto outcome = game_.terminal(p);
        if (outcome == Outcome::VerifierWin) return true;
        if (outcome == Outcome::NotWin) return false;
        const Player mover = game_.turn(p);
        if (remaining == 0 && (mover == Player::Verifier || verifier_wins_only_by_moving<G>()))
            return false;

        const std::string key = game_.key(p);
        auto& entry = memo_[key];
        if (remaining >= entry.min_true) return true;
        if (remaining <= entry.max_false) return false;

        bool result;
        const auto moves = game_.moves(p);
        if (mover == Player::Verifier) {
            result = false;
            for (const auto& m : moves) {
                if (wins(game_.apply(p, m), remaining - 1)) {
                    result = true;
                    break;
                }
            }
        } else {
            result = !moves.empty();
            for (const auto& m : moves) {
                if (!wins(game_.apply(p, m), remaining)) {
                    result = false;
                    break;
                }
            }
        }
        // `entry` may have been invalidated by rehashing during recursion.
        auto& e = memo_[key];
        if (result)
            e.min_true = std::min(e.min_true, remaining);
        else
            e.max_false = std::max(e.max_false, remaining);
        return result;
    }

    std::size_t nodes() const noexcept { return nodes_; }

private:
    struct Entry {
        int max_false = -1;
        int min_true = INT_MAX;
    };

    std::optional<int> min_depth(const Position& p, int limit) {
        for (int d = 0; d <= limit; ++d)
            if (wins(p, d)) return d;
        return std::nullopt;
    }

    void extract(const Position& p, int limit, std::map<std::string, std::string>& strategy) {
        if (game_.terminal(p) != Outcome::Nonterminal) return;
        const std::string key = game_.key(p);
        if (game_.turn(p) == Player::Verifier) {
            if (strategy.contains(key)) return;
            const auto d = min_depth(p, limit);
            if (!d || *d == 0) return;
            for (const auto& m : game_.moves(p)) {
                auto child = game_.apply(p, m);
                if (wins(child, *d - 1)) {
                    strategy.emplace(key, game_.move_text(p, m));
                    extract(child, *d - 1, strategy);
                    return;
                }
            }
        } else {
            if (!visited_falsifier_.emplace(key, limit).second) return;
            for (const auto& m : game_.moves(p)) extract(game_.apply(p, m), limit, strategy);
        }
    }

    const G& game_;
    SolveOptions options_;
    std::size_t nodes_ = 0;
    std::unordered_map<std::string, Entry> memo_;
    std::map<std::string, int> visited_falsifier_;
};

template <GameAdapter G>
SolveResult solve(const G& game, const typename G::Position& root, int k, SolveOptions options = {}) {
    return Solver<G>(game, options).solve(root, k);
}

// ---------------------------------------------------------------------------
// strategy graphs

struct GraphNode {
    std::string id;
    std::string kind;     // "position" or "refuted"
    std::string label;
    std::string key;      // position identity, empty for refuted leaves
    std::string turn;     // "verifier" / "falsifier", empty for refuted leaves
    std::string outcome;  // "verifier_win" / "not_win" / "nonterminal"
    std::string detail;

    friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
    std::string from;
    std::string to;
    std::string kind;   // "strategy", "reply" or "refutation"
    std::string label;  // display move
    std::string move;   // canonical move text

    friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct StrategyGraph {
    std::string root;
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;

    const GraphNode* node(std::string_view id) const;
    std::vector<const GraphEdge*> out_edges(std::string_view id) const;

    friend bool operator==(const StrategyGraph&, const StrategyGraph&) = default;
};

struct GraphOptions {
    /// Expand won positions into the loser's refuted pseudo-legal moves.
    bool show_refutations = false;
    /// Use this winning root move instead of the strategy's choice.
    std::optional<std::string> root_move;
};

enum class GraphFormat { Dot, Json };

std::string export_graph(const StrategyGraph& g, GraphFormat format);
StrategyGraph parse_graph_json(std::string_view text);

namespace detail {

template <GameAdapter G>
class GraphBuilder {
public:
    GraphBuilder(const G& game, const SolveResult& result, const GraphOptions& options)
        : game_(game), result_(result), options_(options) {}

    StrategyGraph build(const typename G::Position& root) {
        graph_.root = visit(root, true);
        return std::move(graph_);
    }

private:
    std::string add_node(GraphNode n) {
        n.id = "n" + std::to_string(graph_.nodes.size());
        graph_.nodes.push_back(std::move(n));
        return graph_.nodes.back().id;
    }

    std::string visit(const typename G::Position& p, bool is_root) {
        const std::string key = game_.key(p);
        if (auto it = ids_.find(key); it != ids_.end()) return it->second;
        const auto outcome = game_.terminal(p);
        const auto mover = game_.turn(p);
        const auto id = add_node({"", "position", game_.position_label(p), key,
                                  std::string(to_string(mover)), std::string(to_string(outcome)),
                                  ""});
        ids_.emplace(key, id);

        if (outcome == Outcome::VerifierWin) {
            if constexpr (RefutingAdapter<G>) {
                if (options_.show_refutations) {
                    for (const auto& r : game_.refutations(p)) {
                        const auto leaf = add_node({"", "refuted", r.capture, "", "", "", r.reason});
                        graph_.edges.push_back({id, leaf, "refutation", r.move, ""});
                    }
                }
            }
            return id;
        }
        if (outcome == Outcome::NotWin) return id;

        if (mover == Player::Verifier) {
            std::string chosen;
            if (is_root && options_.root_move) {
                chosen = *options_.root_move;
            } else {
                auto it = result_.strategy.find(key);
                if (it == result_.strategy.end())
                    throw std::logic_error("strategy has no move for position " + key);
                chosen = it->second;
            }
            for (const auto& m : game_.moves(p)) {
                if (game_.move_text(p, m) != chosen) continue;
                const auto label = game_.move_label(p, m);
                const auto child = visit(game_.apply(p, m), false);
                graph_.edges.push_back({id, child, "strategy", label, chosen});
                return id;
            }
            throw std::logic_error("strategy move " + chosen + " is not available");
        }
        for (const auto& m : game_.moves(p)) {
            const auto text = game_.move_text(p, m);
            const auto label = game_.move_label(p, m);
            const auto child = visit(game_.apply(p, m), false);
            graph_.edges.push_back({id, child, "reply", label, text});
        }
        return id;
    }

    const G& game_;
    const SolveResult& result_;
    const GraphOptions& options_;
    StrategyGraph graph_;
    std::unordered_map<std::string, std::string> ids_;
};

}  // namespace detail

/// Winning-strategy graph: one edge out of every Verifier position (the
/// strategy's move), every legal reply out of every Falsifier position.
/// Positions are shared, so transpositions merge into a DAG.
template <GameAdapter G>
StrategyGraph strategy_graph(const SolveResult& result, const G& game,
                             const typename G::Position& root, const GraphOptions& options = {}) {
    if (!result.forced) throw not_forced_error("no forced win within the requested depth");
    if (options.root_move &&
        std::find(result.winning_moves.begin(), result.winning_moves.end(), *options.root_move) ==
            result.winning_moves.end())
        throw std::invalid_argument("move " + *options.root_move + " is not a winning root move");
    return detail::GraphBuilder<G>(game, result, options).build(root);
}

}  // namespace qarena::game
