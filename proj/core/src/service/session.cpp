#include "qarena/session.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

#include "qarena/bachet.hpp"
#include "qarena/chess.hpp"
#include "qarena/formula.hpp"
#include "qarena/limit_game.hpp"
#include "qarena/mate_game.hpp"

namespace qarena::service {

using json = nlohmann::ordered_json;
using game::Player;

namespace {

[[noreturn]] void bad_config(const std::string& what) { throw request_error(400, "invalid_config", what); }

std::string player_name(Player p) { return p == Player::Verifier ? "verifier" : "falsifier"; }

json player_json(std::optional<Player> p) { return p ? json(player_name(*p)) : json(); }

void only_fields(const json& j, std::initializer_list<const char*> allowed) {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (!ok.contains(key)) bad_config("unknown field '" + key + "'");
}

limits::HumanRole role_of(const json& config) {
    if (!config.contains("human")) return limits::HumanRole::Falsifier;
    if (!config["human"].is_string()) bad_config("human must be \"verifier\", \"falsifier\" or \"both\"");
    const auto r = limits::parse_human_role(config["human"].get<std::string>());
    if (!r) bad_config("human must be \"verifier\", \"falsifier\" or \"both\"");
    return *r;
}

bool engine_plays(limits::HumanRole human, Player p) {
    return human == limits::HumanRole::Both ? false
                                           : (human == limits::HumanRole::Verifier) != (p == Player::Verifier);
}

int integer_field(const json& config, const char* name, int fallback, int lo, int hi) {
    if (!config.contains(name)) return fallback;
    const auto& v = config[name];
    if (!v.is_number_integer()) bad_config(std::string(name) + " must be an integer");
    const auto n = v.get<long long>();
    if (n < lo || n > hi)
        bad_config(std::string(name) + " must be between " + std::to_string(lo) + " and " + std::to_string(hi));
    return static_cast<int>(n);
}

// Numbers may be given as JSON numbers or constant expressions ("3 - sqrt(8)").
double number_field(const json& v, const char* name) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            const auto e = limits::parse_expr(v.get<std::string>());
            if (e.is_constant()) return limits::eval_point(e, 0);
        } catch (const std::exception&) {
        }
    }
    bad_config(std::string(name) + " must be a number");
}

std::string move_text(const json& request) {
    if (!request.is_object() || !request.contains("move")) throw request_error(400, "invalid_move", "expected {\"move\": ...}");
    const auto& m = request["move"];
    if (m.is_string()) return m.get<std::string>();
    if (m.is_number_integer()) return std::to_string(m.get<long long>());
    if (m.is_number()) return limits::format_number(m.get<double>());
    throw request_error(400, "invalid_move", "move must be a string or number");
}

std::optional<Player> requested_player(const json& request) {
    if (!request.contains("player")) return std::nullopt;
    const auto& p = request["player"];
    if (p == "verifier") return Player::Verifier;
    if (p == "falsifier") return Player::Falsifier;
    throw request_error(400, "invalid_move", "player must be \"verifier\" or \"falsifier\"");
}

json parse_json(std::string_view text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw request_error(400, "invalid_json", std::string(what) + " is not valid JSON: " + e.what());
    }
}

// ---------------------------------------------------------------------------

class Backend {
public:
    virtual ~Backend() = default;
    virtual json config() const = 0;
    virtual std::optional<Player> to_move() const = 0;
    virtual std::optional<Player> winner() const = 0;
    virtual std::string status() const = 0;
    virtual std::string phase() const = 0;
    virtual bool human_to_move() const = 0;
    virtual void move(std::optional<Player> who, const std::string& text) = 0;
    virtual json history() const = 0;
    virtual json state() const = 0;
    virtual std::string graph(game::GraphFormat format, bool refutations, const std::optional<std::string>& key) const = 0;

    std::optional<std::string> warning;

protected:
    // Common gatekeeping for human moves in turn-based backends.
    void check_turn(limits::HumanRole human, std::optional<Player> who) const {
        const auto mover = to_move();
        if (!mover) throw request_error(409, "game_over", "the game is over");
        if (who && *who != *mover) throw request_error(409, "wrong_mover", "it is the " + player_name(*mover) + "'s move");
        if (engine_plays(human, *mover))
            throw request_error(409, "wrong_mover", "the engine plays the " + player_name(*mover));
    }
};

template <class G>
std::string solved_graph(const G& game, const typename G::Position& pos, int depth, game::GraphFormat format,
                         bool refutations, const std::optional<std::string>& key) {
    if (game.terminal(pos) != game::Outcome::Nonterminal) throw request_error(422, "game_over", "the game is over");
    if (depth < 1) throw request_error(422, "not_forced", "no moves left for the verifier");
    const auto result = game::solve(game, pos, depth);
    game::GraphOptions options;
    options.show_refutations = refutations;
    options.root_move = key;
    try {
        return game::export_graph(game::strategy_graph(result, game, pos, options), format);
    } catch (const game::not_forced_error& e) {
        throw request_error(422, "not_forced", e.what());
    } catch (const std::invalid_argument& e) {
        throw request_error(422, "bad_key", e.what());
    }
}

class ChessBackend final : public Backend {
public:
    explicit ChessBackend(const json& c) {
        only_fields(c, {"backend", "fen", "depth", "human"});
        if (!c.contains("fen") || !c["fen"].is_string()) bad_config("chess sessions need a fen");
        try {
            pos_ = chess::parse_fen(c["fen"].get<std::string>());
        } catch (const chess::fen_error& e) {
            bad_config(std::string("bad fen: ") + e.what());
        }
        fen_ = chess::render_fen(pos_);
        depth_ = integer_field(c, "depth", 1, 1, 8);
        human_ = role_of(c);
        game_ = chess::MateGame::for_position(pos_);
        if (engine_plays(human_, Player::Verifier) && game_.terminal(pos_) == game::Outcome::Nonterminal &&
            !game::solve(game_, pos_, depth_).forced)
            warning = "no forced mate in " + std::to_string(depth_) + "; the engine plays on without one";
        update();
        run_engine();
    }

    json config() const override {
        return {{"backend", "chess"}, {"fen", fen_}, {"depth", depth_}, {"human", limits::to_string(human_)}};
    }
    std::optional<Player> to_move() const override {
        if (status_ != "in_progress") return std::nullopt;
        return game_.turn(pos_);
    }
    std::optional<Player> winner() const override { return winner_; }
    std::string status() const override { return status_; }
    std::string phase() const override { return status_ == "in_progress" ? "play" : "over"; }
    bool human_to_move() const override { return to_move() && !engine_plays(human_, *to_move()); }

    void move(std::optional<Player> who, const std::string& text) override {
        check_turn(human_, who);
        apply(resolve(text), false);
        run_engine();
    }

    json history() const override { return history_; }

    json state() const override {
        json moves = json::array();
        if (status_ == "in_progress")
            for (const auto& m : chess::legal_moves(pos_))
                moves.push_back({{"move", chess::to_coordinate(m)}, {"label", chess::to_san(pos_, m)}});
        return {{"fen", chess::render_fen(pos_)},
                {"attacker", game_.attacker() == chess::Color::White ? "white" : "black"},
                {"check", chess::in_check(pos_, pos_.side_to_move())},
                {"verifier_moves_left", depth_ - verifier_moves_},
                {"legal_moves", moves}};
    }

    std::string graph(game::GraphFormat format, bool refutations, const std::optional<std::string>& key) const override {
        if (status_ != "in_progress") throw request_error(422, "game_over", "the game is over");
        return solved_graph(game_, pos_, depth_ - verifier_moves_, format, refutations, key);
    }

private:
    chess::Move resolve(const std::string& text) const {
        try {
            return chess::parse_move(pos_, text);
        } catch (const std::invalid_argument& e) {
            // also accept SAN, with or without the check suffix
            for (const auto& m : chess::legal_moves(pos_)) {
                auto san = chess::to_san(pos_, m);
                if (san == text) return m;
                while (!san.empty() && (san.back() == '+' || san.back() == '#')) san.pop_back();
                if (san == text) return m;
            }
            throw request_error(422, "illegal_move", e.what());
        }
    }

    void apply(const chess::Move& m, bool engine) {
        const Player mover = game_.turn(pos_);
        history_.push_back({{"player", player_name(mover)},
                            {"move", chess::to_coordinate(m)},
                            {"label", chess::to_san(pos_, m)},
                            {"engine", engine}});
        pos_ = chess::apply_move(pos_, m);
        if (mover == Player::Verifier) ++verifier_moves_;
        update();
    }

    void update() {
        switch (chess::status(pos_)) {
            case chess::Status::Checkmate:
                status_ = "checkmate";
                winner_ = pos_.side_to_move() == game_.attacker() ? Player::Falsifier : Player::Verifier;
                return;
            case chess::Status::Stalemate:
                status_ = "stalemate";
                winner_ = Player::Falsifier;
                return;
            default: break;
        }
        if (verifier_moves_ >= depth_) {
            status_ = "depth_exhausted";
            winner_ = Player::Falsifier;
            return;
        }
        status_ = "in_progress";
    }

    void run_engine() {
        while (to_move() && engine_plays(human_, *to_move())) apply(engine_choice(), true);
    }

    chess::Move engine_choice() const {
        const int remaining = depth_ - verifier_moves_;
        const auto moves = chess::legal_moves(pos_);
        if (game_.turn(pos_) == Player::Verifier) {
            const auto r = game::solve(game_, pos_, remaining);
            if (r.forced && !r.winning_moves.empty()) return chess::parse_move(pos_, r.winning_moves.front());
            return moves.front();
        }
        // defend: prefer a reply that escapes, else the one delaying mate longest
        const chess::Move* best = nullptr;
        int best_depth = -1;
        for (const auto& m : moves) {
            const auto r = game::solve(game_, chess::apply_move(pos_, m), remaining);
            if (!r.forced) return m;
            if (*r.minimal_depth > best_depth) {
                best_depth = *r.minimal_depth;
                best = &m;
            }
        }
        return *best;
    }

    chess::Position pos_;
    std::string fen_;
    int depth_ = 1;
    limits::HumanRole human_ = limits::HumanRole::Falsifier;
    chess::MateGame game_;
    int verifier_moves_ = 0;
    std::string status_ = "in_progress";
    std::optional<Player> winner_;
    json history_ = json::array();
};

class BachetBackend final : public Backend {
public:
    explicit BachetBackend(const json& c) {
        only_fields(c, {"backend", "tokens", "human"});
        if (!c.contains("tokens")) bad_config("bachet sessions need tokens");
        tokens_ = integer_field(c, "tokens", 0, 1, 10000);
        human_ = role_of(c);
        state_ = {tokens_, Player::Verifier};
        if (engine_plays(human_, Player::Verifier) && bachet::is_losing_count(tokens_))
            warning = std::to_string(tokens_) + " tokens is a lost count for the first player";
        run_engine();
    }

    json config() const override {
        return {{"backend", "bachet"}, {"tokens", tokens_}, {"human", limits::to_string(human_)}};
    }
    std::optional<Player> to_move() const override {
        if (state_.tokens == 0) return std::nullopt;
        return state_.to_move;
    }
    std::optional<Player> winner() const override {
        if (state_.tokens != 0) return std::nullopt;
        return game::opponent(state_.to_move);
    }
    std::string status() const override { return state_.tokens == 0 ? "over" : "in_progress"; }
    std::string phase() const override { return state_.tokens == 0 ? "over" : "play"; }
    bool human_to_move() const override { return to_move() && !engine_plays(human_, *to_move()); }

    void move(std::optional<Player> who, const std::string& text) override {
        check_turn(human_, who);
        int n = 0;
        try {
            std::size_t used = 0;
            n = std::stoi(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        } catch (const std::exception&) {
            throw request_error(422, "illegal_move", "a move is the number of tokens to remove");
        }
        try {
            apply(n, false);
        } catch (const bachet::invalid_removal& e) {
            throw request_error(422, "illegal_move", e.what());
        }
        run_engine();
    }

    json history() const override { return history_; }

    json state() const override {
        json moves = json::array();
        for (int m : bachet::bachet_moves(state_))
            moves.push_back({{"move", std::to_string(m)}, {"label", "remove " + std::to_string(m)}});
        return {{"tokens", state_.tokens}, {"legal_moves", moves}};
    }

    std::string graph(game::GraphFormat format, bool, const std::optional<std::string>& key) const override {
        return solved_graph(bachet::BachetGame{}, state_, std::max(1, (state_.tokens + 1) / 2), format, false, key);
    }

private:
    void apply(int removal, bool engine) {
        const auto next = bachet::bachet_apply(state_, removal);
        history_.push_back({{"player", player_name(state_.to_move)},
                            {"move", std::to_string(removal)},
                            {"label", "remove " + std::to_string(removal)},
                            {"engine", engine},
                            {"tokens", next.tokens}});
        state_ = next;
    }

    void run_engine() {
        while (to_move() && engine_plays(human_, *to_move())) apply(*bachet::bachet_strategy(state_), true);
    }

    int tokens_ = 0;
    limits::HumanRole human_ = limits::HumanRole::Falsifier;
    bachet::BachetState state_;
    json history_ = json::array();
};

class LimitBackend final : public Backend {
public:
    LimitBackend(const json& c, bool divergence) : divergence_(divergence) {
        only_fields(c, {"backend", "kind", "expr", "x0", "a", "human"});
        limits::LimitGameConfig config;
        config.divergence = divergence;
        config.human = role_of(c);
        const auto kind_text = c.value("kind", std::string("point"));
        const auto kind = limits::parse_problem_kind(kind_text);
        if (!kind) bad_config("kind must be \"point\", \"sequence\" or \"infinity\"");
        config.problem.kind = *kind;
        if (!c.contains("expr") || !c["expr"].is_string()) bad_config("limit sessions need an expr");
        try {
            config.problem.expr = limits::parse_expr(c["expr"].get<std::string>());
        } catch (const limits::expr_syntax_error& e) {
            bad_config(std::string("bad expr: ") + e.what());
        }
        if (*kind == limits::ProblemKind::FunctionLimitAtPoint) {
            if (!c.contains("x0")) bad_config("point limits need x0");
            config.problem.x0 = number_field(c["x0"], "x0");
        } else if (c.contains("x0")) {
            bad_config("x0 applies to point limits only");
        }
        if (c.contains("a") && !c["a"].is_null()) config.a = number_field(c["a"], "a");
        if (!std::isfinite(config.problem.x0) || (config.a && !std::isfinite(*config.a))) bad_config("numbers must be finite");
        game_.emplace(config);
    }

    json config() const override {
        const auto& c = game_->config();
        json j = {{"backend", divergence_ ? "limit-divergence" : "limit"},
                  {"kind", limits::to_string(c.problem.kind)},
                  {"expr", c.problem.expr.text()}};
        if (c.problem.kind == limits::ProblemKind::FunctionLimitAtPoint) j["x0"] = c.problem.x0;
        j["a"] = c.a ? json(*c.a) : json();
        j["human"] = limits::to_string(c.human);
        return j;
    }
    std::optional<Player> to_move() const override {
        if (game_->finished()) return std::nullopt;
        return game_->mover();
    }
    std::optional<Player> winner() const override {
        if (!game_->outcome()) return std::nullopt;
        return game_->outcome()->winner;
    }
    std::string status() const override { return game_->finished() ? "over" : "in_progress"; }
    std::string phase() const override { return std::string(limits::to_string(game_->phase())); }
    bool human_to_move() const override { return game_->human_to_move(); }

    void move(std::optional<Player> who, const std::string& text) override {
        if (game_->finished()) throw request_error(409, "game_over", "the game is over");
        try {
            game_->play(who.value_or(game_->mover()), text);
        } catch (const limits::move_rejected& e) {
            const auto code = std::string(limits::to_string(e.code()));
            const bool turn = e.code() == limits::Rejection::WrongMover || e.code() == limits::Rejection::GameOver;
            throw request_error(turn ? 409 : 422, code, e.what());
        }
    }

    json history() const override {
        json h = json::array();
        for (const auto& m : game_->history())
            h.push_back({{"player", player_name(m.player)},
                         {"phase", limits::to_string(m.phase)},
                         {"move", m.text},
                         {"value", m.value},
                         {"label", label(m.phase, m.text)},
                         {"engine", m.engine},
                         {"note", m.note}});
        return h;
    }

    json state() const override {
        const auto& g = *game_;
        const auto& p = g.config().problem;
        const auto opt = [](std::optional<double> v) { return v ? json(*v) : json(); };
        json s = {{"kind", limits::to_string(p.kind)}, {"expr", p.expr.text()}};
        if (p.kind == limits::ProblemKind::FunctionLimitAtPoint) s["x0"] = p.x0;
        s["formula"] = formula::render(g.session_formula(), formula::Style::Unicode);
        s["formula_ascii"] = formula::render(g.session_formula());
        s["scheme"] = g.phase_scheme();
        json phases = json::array();
        for (auto ph : g.phases()) phases.push_back(limits::to_string(ph));
        s["phases"] = phases;
        s["a"] = opt(g.a());
        s["epsilon"] = opt(g.epsilon());
        s["bound_name"] = bound_name();
        s["bound"] = opt(g.bound());
        s["point_name"] = p.kind == limits::ProblemKind::SequenceLimit ? "n" : "x";
        s["point"] = opt(g.point());
        if (const auto& o = g.outcome()) {
            s["outcome"] = {{"inequality_holds", o->inequality_holds},
                            {"value", o->value},
                            {"distance", o->distance},
                            {"winner", player_name(o->winner)},
                            {"text", o->text}};
        } else {
            s["outcome"] = json();
        }
        s["plot"] = plot();
        return s;
    }

    // The play so far as a path: one node per state, one edge per move.
    std::string graph(game::GraphFormat format, bool, const std::optional<std::string>&) const override {
        game::StrategyGraph g;
        const auto& moves = game_->history();
        const auto add = [&](std::string label, std::string turn, std::string outcome) {
            g.nodes.push_back({"n" + std::to_string(g.nodes.size()), "position", std::move(label), "", std::move(turn),
                               std::move(outcome), ""});
            return g.nodes.back().id;
        };
        const auto& c = game_->config();
        std::string prev = add(c.a ? "a = " + limits::format_number(*c.a) : "start",
                               moves.empty() ? std::string() : player_name(moves.front().player), "nonterminal");
        g.root = prev;
        for (std::size_t i = 0; i < moves.size(); ++i) {
            const auto& m = moves[i];
            const bool last = i + 1 == moves.size();
            std::string turn = last ? std::string() : player_name(moves[i + 1].player);
            std::string outcome = "nonterminal";
            std::string node_label = label(m.phase, limits::format_number(m.value));
            if (last && game_->outcome()) {
                node_label = game_->outcome()->text;
                outcome = game_->outcome()->winner == Player::Verifier ? "verifier_win" : "not_win";
            }
            const auto id = add(node_label, turn, outcome);
            g.edges.push_back({prev, id, m.player == Player::Verifier ? "strategy" : "reply",
                               label(m.phase, m.text), m.text});
            prev = id;
        }
        return game::export_graph(g, format);
    }

private:
    std::string bound_name() const {
        switch (game_->config().problem.kind) {
            case limits::ProblemKind::SequenceLimit: return "N";
            case limits::ProblemKind::FunctionLimitAtInfinity: return "M";
            default: return "delta";
        }
    }

    std::string label(limits::Phase phase, const std::string& text) const {
        switch (phase) {
            case limits::Phase::ChooseA: return "a = " + text;
            case limits::Phase::ChooseEpsilon: return "eps = " + text;
            case limits::Phase::ChooseDelta: return "delta = " + text;
            case limits::Phase::ChooseN: return "N = " + text;
            case limits::Phase::ChooseM: return "M = " + text;
            case limits::Phase::ChooseX: return "x = " + text;
            case limits::Phase::ChooseNIndex: return "n = " + text;
            case limits::Phase::Verdict: break;
        }
        return text;
    }

    // Samples of f for display; undefined points are null.
    json plot() const {
        const auto& p = game_->config().problem;
        json xs = json::array(), ys = json::array();
        const auto sample = [&](double x) {
            xs.push_back(x);
            try {
                ys.push_back(limits::eval_point(p.expr, x));
            } catch (const limits::domain_error&) {
                ys.push_back(nullptr);
            }
        };
        switch (p.kind) {
            case limits::ProblemKind::FunctionLimitAtPoint:
                for (int i = 0; i <= 200; ++i) sample(p.x0 - 1 + i / 100.0);
                break;
            case limits::ProblemKind::SequenceLimit:
                for (int n = 1; n <= 60; ++n) sample(n);
                break;
            case limits::ProblemKind::FunctionLimitAtInfinity: {
                const double hi = game_->bound() ? std::max(100.0, 2 * *game_->bound()) : 100.0;
                for (int i = 1; i <= 200; ++i) sample(hi * i / 200.0);
                break;
            }
        }
        return {{"x", xs}, {"y", ys}};
    }

    bool divergence_;
    std::optional<limits::LimitGame> game_;
};

std::unique_ptr<Backend> make_backend(const json& c) {
    if (!c.is_object()) bad_config("config must be a JSON object");
    if (!c.contains("backend") || !c["backend"].is_string()) bad_config("config needs a backend");
    const auto b = c["backend"].get<std::string>();
    if (b == "chess") return std::make_unique<ChessBackend>(c);
    if (b == "bachet") return std::make_unique<BachetBackend>(c);
    if (b == "limit") return std::make_unique<LimitBackend>(c, false);
    if (b == "limit-divergence") return std::make_unique<LimitBackend>(c, true);
    bad_config("unknown backend '" + b + "'");
}

}  // namespace

struct Session::Impl {
    std::string id;
    std::unique_ptr<Backend> backend;
};

Session::Session(std::string id, std::string_view config_json) : impl_(std::make_unique<Impl>()) {
    impl_->id = std::move(id);
    impl_->backend = make_backend(parse_json(config_json, "config"));
}

Session::~Session() = default;
Session::Session(Session&&) noexcept = default;
Session& Session::operator=(Session&&) noexcept = default;

const std::string& Session::id() const { return impl_->id; }

std::string Session::config_json() const { return impl_->backend->config().dump(); }

const std::optional<std::string>& Session::warning() const { return impl_->backend->warning; }

void Session::move(std::string_view move_json) {
    const auto request = parse_json(move_json, "move");
    if (!request.is_object()) throw request_error(400, "invalid_move", "expected {\"move\": ...}");
    for (const auto& [key, value] : request.items())
        if (key != "move" && key != "player") throw request_error(400, "invalid_move", "unknown field '" + key + "'");
    impl_->backend->move(requested_player(request), move_text(request));
}

std::string Session::snapshot_json() const {
    const auto& b = *impl_->backend;
    json j;
    j["schema"] = "session/1";
    j["id"] = impl_->id;
    j["backend"] = b.config()["backend"];
    j["config"] = b.config();
    j["status"] = b.status();
    j["phase"] = b.phase();
    j["to_move"] = player_json(b.to_move());
    j["human_to_move"] = b.human_to_move();
    j["winner"] = player_json(b.winner());
    j["warning"] = b.warning ? json(*b.warning) : json();
    j["history"] = b.history();
    j["state"] = b.state();
    return j.dump();
}

std::string Session::graph(game::GraphFormat format, bool refutations, const std::optional<std::string>& key) const {
    return impl_->backend->graph(format, refutations, key);
}

}  // namespace qarena::service
