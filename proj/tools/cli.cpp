#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qarena/chess.hpp"
#include "qarena/formula.hpp"
#include "qarena/limits.hpp"
#include "qarena/puzzle.hpp"
#include "qarena/service.hpp"
#include "qarena/session.hpp"

namespace qarena::cli {

namespace {

using json = nlohmann::ordered_json;

// A failure of the requested operation, as opposed to a usage error.
struct domain_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double constant(const std::string& text, const char* what) {
    try {
        const auto e = limits::parse_expr(text);
        if (e.is_constant()) return limits::eval_point(e, 0);
    } catch (const std::exception& e) {
        throw domain_failure(std::string(what) + ": " + e.what());
    }
    throw domain_failure(std::string(what) + " must be a number");
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    file << text;
    if (!file) throw domain_failure("cannot write " + path);
}

// ---------------------------------------------------------------------------
// play

struct PlayOptions {
    std::string backend;
    std::string fen;
    int depth = 1;
    int tokens = 10;
    std::string kind = "point";
    std::string expr;
    std::string x0;
    std::string a;
    std::string human = "falsifier";
    std::string script;
};

json play_config(const PlayOptions& o) {
    json c = {{"backend", o.backend}};
    if (o.backend == "chess") {
        c["fen"] = o.fen.empty() ? std::string(chess::kStartFen) : o.fen;
        c["depth"] = o.depth;
    } else if (o.backend == "bachet") {
        c["tokens"] = o.tokens;
    } else {
        if (o.expr.empty()) throw domain_failure("limit games need --expr");
        c["kind"] = o.kind;
        c["expr"] = o.expr;
        if (!o.x0.empty()) c["x0"] = constant(o.x0, "x0");
        if (!o.a.empty()) c["a"] = constant(o.a, "a");
    }
    c["human"] = o.human;
    return c;
}

void print_entry(const json& snap, const json& h, std::ostream& out) {
    out << h["player"].get<std::string>() << (h["engine"].get<bool>() ? " (engine)" : "") << ": "
        << h["label"].get<std::string>();
    if (snap["backend"] == "bachet") out << ", " << h["tokens"].get<int>() << " left";
    if (h.contains("note") && !h["note"].get<std::string>().empty()) out << " [" << h["note"].get<std::string>() << "]";
    out << '\n';
}

void print_result(const json& snap, std::ostream& out) {
    const auto winner = snap["winner"].is_null() ? std::string("nobody") : snap["winner"].get<std::string>();
    const auto& backend = snap["backend"];
    if (backend == "chess")
        out << snap["status"].get<std::string>() << ": " << winner << " wins\n";
    else if (backend == "bachet")
        out << "no tokens left: " << winner << " wins\n";
    else
        out << snap["state"]["outcome"]["text"].get<std::string>() << ": " << winner << " wins\n";
}

int play(const PlayOptions& o, std::istream& in, std::ostream& out) {
    service::Session session("cli", play_config(o).dump());
    auto snap = json::parse(session.snapshot_json());
    if (o.backend == "chess") out << "position: " << snap["state"]["fen"].get<std::string>() << '\n';
    if (o.backend == "bachet") out << "tokens: " << o.tokens << '\n';
    if (o.backend.rfind("limit", 0) == 0) out << "claim: " << snap["state"]["formula"].get<std::string>() << '\n';
    out << "you play: " << o.human << '\n';
    if (!snap["warning"].is_null()) out << "warning: " << snap["warning"].get<std::string>() << '\n';

    std::size_t shown = 0;
    const auto show_new = [&] {
        snap = json::parse(session.snapshot_json());
        for (; shown < snap["history"].size(); ++shown) print_entry(snap, snap["history"][shown], out);
    };
    show_new();

    std::ifstream script;
    if (!o.script.empty()) {
        script.open(o.script);
        if (!script) throw domain_failure("cannot read " + o.script);
    }
    std::istream& moves = o.script.empty() ? in : script;
    std::string line;
    while (snap["status"] == "in_progress") {
        out << snap["to_move"].get<std::string>() << "> " << std::flush;
        if (!std::getline(moves, line)) {
            out << "\nstopped before the end of the game\n";
            return 0;
        }
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
        if (line == "quit") {
            out << "stopped before the end of the game\n";
            return 0;
        }
        if (!o.script.empty()) out << line << '\n';
        try {
            session.move(json({{"move", line}}).dump());
        } catch (const service::request_error& e) {
            out << "rejected: " << e.what() << '\n';
            continue;
        }
        show_new();
    }
    print_result(snap, out);
    return 0;
}

// ---------------------------------------------------------------------------
// verify-delta

struct VerifyOptions {
    std::string expr, x0, a, eps, delta, certificate;
    std::size_t max_boxes = limits::Effort{}.max_boxes;
};

int verify_delta(const VerifyOptions& o, std::ostream& out) {
    limits::LimitProblem p;
    p.kind = limits::ProblemKind::FunctionLimitAtPoint;
    try {
        p.expr = limits::parse_expr(o.expr);
    } catch (const limits::expr_syntax_error& e) {
        throw domain_failure(std::string("expr: ") + e.what());
    }
    p.x0 = constant(o.x0, "x0");
    p.limit = constant(o.a, "a");
    const double eps = constant(o.eps, "eps");
    if (!(eps > 0)) throw domain_failure("eps must be positive");
    limits::Effort effort;
    effort.max_boxes = o.max_boxes;

    double delta = 0;
    limits::Verdict v;
    if (o.delta.empty()) {
        const auto s = limits::find_delta(p, eps, effort);
        delta = s.delta;
        v = s.verdict;
        if (s.status != limits::VerdictKind::Proved) {
            out << "no delta found: " << v.reason << '\n';
            return 1;
        }
        out << "delta = " << limits::format_number(delta) << '\n';
    } else {
        delta = constant(o.delta, "delta");
        if (!(delta > 0)) throw domain_failure("delta must be positive");
        v = limits::verify_delta(p, eps, delta, effort);
    }
    out << limits::to_string(v.kind) << ": " << v.reason << '\n';
    if (!o.certificate.empty()) write_output(o.certificate, limits::certificate_json(p, eps, delta, v), out);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantifier games: mate-in-k, Bachet and limit games", "qarena"};
    app.require_subcommand(1);

    std::string fen;
    int depth = 1;
    auto* solve_chess = app.add_subcommand("solve-chess", "Find a forced mate within a number of moves");
    solve_chess->add_option("--fen", fen, "Position in FEN")->required();
    solve_chess->add_option("--depth", depth, "Moves of the attacking side")->check(CLI::Range(1, 8));

    std::string perft_fen(chess::kStartFen);
    int perft_depth = 1;
    bool divide = false;
    auto* perft = app.add_subcommand("perft", "Count leaf nodes of the legal move tree");
    perft->add_option("--fen", perft_fen, "Position in FEN (default: start position)");
    perft->add_option("--depth", perft_depth, "Plies")->required()->check(CLI::Range(0, 7));
    perft->add_flag("--divide", divide, "Print the count below each root move");

    PlayOptions po;
    auto* play_cmd = app.add_subcommand("play", "Play a game on the terminal");
    play_cmd->add_option("backend", po.backend, "chess, bachet, limit or limit-divergence")
        ->required()
        ->check(CLI::IsMember({"chess", "bachet", "limit", "limit-divergence"}));
    play_cmd->add_option("--fen", po.fen, "Chess position (default: start position)");
    play_cmd->add_option("--depth", po.depth, "Chess: moves allowed to the attacker")->check(CLI::Range(1, 8));
    play_cmd->add_option("--tokens", po.tokens, "Bachet: tokens on the table")->check(CLI::Range(1, 10000));
    play_cmd->add_option("--kind", po.kind, "Limit kind")->check(CLI::IsMember({"point", "sequence", "infinity"}));
    play_cmd->add_option("--expr", po.expr, "Limit games: f(x) or a_n");
    play_cmd->add_option("--x0", po.x0, "Limit games: the point x0");
    play_cmd->add_option("--a", po.a, "Limit games: preset claimed limit");
    play_cmd->add_option("--human", po.human, "Your role")->check(CLI::IsMember({"verifier", "falsifier", "both"}));
    play_cmd->add_option("--script", po.script, "Read moves from this file instead of standard input");

    std::string formula_text;
    bool absorb = false, unicode = false;
    auto* negate = app.add_subcommand("negate", "Negate a prenex formula");
    negate->add_option("--formula", formula_text, "Formula text")->required();
    negate->add_flag("--absorb", absorb, "Fold a leading guard of the matrix into the last quantifier's bound");
    negate->add_flag("--unicode", unicode, "Print with logical symbols");

    puzzle::PuzzleRequest req;
    std::string graph_format = "dot", output;
    std::string key;
    int tokens = 0;
    auto* export_graph = app.add_subcommand("export-graph", "Write the winning-strategy graph");
    auto* fen_opt = export_graph->add_option("--fen", fen, "Chess position");
    auto* tokens_opt = export_graph->add_option("--tokens", tokens, "Bachet token count")->check(CLI::Range(0, 10000));
    fen_opt->excludes(tokens_opt);
    export_graph->add_option("--depth", req.depth, "Moves of the Verifier")->check(CLI::Range(1, 8));
    export_graph->add_option("--format", graph_format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
    export_graph->add_flag("--refutations", req.refutations, "Show refuted moves at won positions");
    export_graph->add_option("--key", key, "Root move to show, in coordinate notation");
    export_graph->add_option("--output,-o", output, "Output file (default: standard output)");

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify-delta", "Certify or refute a delta for a limit at a point");
    verify->add_option("--expr", vo.expr, "f(x)")->required();
    verify->add_option("--x0", vo.x0, "The point x0")->required();
    verify->add_option("--a", vo.a, "Claimed limit")->required();
    verify->add_option("--eps", vo.eps, "Epsilon")->required();
    verify->add_option("--delta", vo.delta, "Delta to check (omit to search by halving)");
    verify->add_option("--max-boxes", vo.max_boxes, "Subdivision budget");
    verify->add_option("--certificate", vo.certificate, "Write the certificate JSON here ('-' for standard output)");

    int port = 8080;
    std::string host = "127.0.0.1", data_dir;
    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--port", port, "Port")->check(CLI::Range(0, 65535));
    serve->add_option("--host", host, "Address to bind");
    serve->add_option("--data-dir", data_dir, "Event-log directory (default: $QARENA_DATA_DIR)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (solve_chess->parsed()) {
            puzzle::PuzzleRequest r;
            r.fen = fen;
            r.depth = depth;
            const auto s = puzzle::solve_puzzle(r);
            out << s.summary << '\n';
            if (s.winning.size() > 1) {
                out << "winning moves:";
                for (const auto& w : s.winning) out << ' ' << w.label;
                out << '\n';
            }
            return 0;
        }
        if (perft->parsed()) {
            const auto root = chess::parse_fen(perft_fen);
            if (divide && perft_depth > 0) {
                std::uint64_t total = 0;
                for (const auto& m : chess::legal_moves(root)) {
                    const auto n = chess::perft(chess::apply_move(root, m), perft_depth - 1);
                    out << chess::to_coordinate(m) << ": " << n << '\n';
                    total += n;
                }
                out << "total: " << total << '\n';
            } else {
                out << chess::perft(root, perft_depth) << '\n';
            }
            return 0;
        }
        if (play_cmd->parsed()) return play(po, in, out);
        if (negate->parsed()) {
            const auto n = formula::negate(formula::parse_formula(formula_text), {absorb});
            out << formula::render(n, unicode ? formula::Style::Unicode : formula::Style::Ascii) << '\n';
            return 0;
        }
        if (export_graph->parsed()) {
            if (fen_opt->count())
                req.fen = fen;
            else if (tokens_opt->count())
                req.tokens = tokens;
            else
                throw CLI::RequiredError("--fen or --tokens");
            if (!key.empty()) req.key = key;
            write_output(output, puzzle::puzzle_graph(req, graph_format == "dot" ? game::GraphFormat::Dot
                                                                                   : game::GraphFormat::Json),
                         out);
            return 0;
        }
        if (verify->parsed()) return verify_delta(vo, out);
        if (serve->parsed()) {
            if (data_dir.empty())
                if (const char* env = std::getenv("QARENA_DATA_DIR")) data_dir = env;
            service::Service svc(data_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(data_dir));
            for (const auto& e : svc.load_errors()) err << "skipped event log " << e << '\n';
            service::HttpServer server(svc);
            const int bound = server.bind(host, port);
            if (bound < 0) throw domain_failure("cannot bind " + host + ":" + std::to_string(port));
            out << "listening on http://" << host << ':' << bound
                << (data_dir.empty() ? " (sessions kept in memory)" : " (event logs in " + data_dir + ")") << std::endl;
            server.run();
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    } catch (const formula::syntax_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const service::request_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace qarena::cli
