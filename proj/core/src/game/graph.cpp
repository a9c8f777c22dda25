#include <json.hpp>

#include "qarena/game.hpp"

namespace qarena::game {

using json = nlohmann::ordered_json;

std::string_view to_string(Player p) {
    return p == Player::Verifier ? "verifier" : "falsifier";
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::VerifierWin: return "verifier_win";
        case Outcome::NotWin: return "not_win";
        case Outcome::Nonterminal: return "nonterminal";
    }
    return "nonterminal";
}

Player opponent(Player p) { return p == Player::Verifier ? Player::Falsifier : Player::Verifier; }

std::string scheme_for_depth(int k) {
    if (k < 1) throw std::invalid_argument("depth must be at least 1");
    std::string s;
    for (int i = 0; i < k; ++i) s += "∃∀";
    return s;
}

const GraphNode* StrategyGraph::node(std::string_view id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

std::vector<const GraphEdge*> StrategyGraph::out_edges(std::string_view id) const {
    std::vector<const GraphEdge*> out;
    for (const auto& e : edges)
        if (e.from == id) out.push_back(&e);
    return out;
}

namespace {

std::string dot_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out;
}

std::string to_dot(const StrategyGraph& g) {
    std::string out = "digraph strategy {\n  rankdir=LR;\n  node [fontname=\"Helvetica\"];\n";
    for (const auto& n : g.nodes) {
        std::string attrs;
        if (n.kind == "refuted") {
            attrs = "shape=plaintext";
        } else {
            std::string quant = n.turn == "verifier" ? "∃ " : "∀ ";
            if (n.outcome != "nonterminal") quant.clear();
            attrs = "label=\"" + dot_escape(quant + n.label) + "\"";
            attrs += n.turn == "verifier" ? ", shape=box" : ", shape=ellipse";
            if (n.outcome == "verifier_win") attrs += ", peripheries=2";
            out += "  " + n.id + " [" + attrs + "];\n";
            continue;
        }
        out += "  " + n.id + " [label=\"" + dot_escape(n.label) + "\", " + attrs + "];\n";
    }
    for (const auto& e : g.edges) {
        out += "  " + e.from + " -> " + e.to + " [label=\"" + dot_escape(e.label) + "\"";
        if (e.kind == "strategy") out += ", penwidth=2";
        if (e.kind == "refutation") out += ", style=dashed";
        out += "];\n";
    }
    out += "}\n";
    return out;
}

std::string to_json(const StrategyGraph& g) {
    json j;
    j["schema"] = "graph/1";
    j["root"] = g.root;
    j["nodes"] = json::array();
    for (const auto& n : g.nodes) {
        j["nodes"].push_back({{"id", n.id},
                              {"kind", n.kind},
                              {"label", n.label},
                              {"key", n.key},
                              {"turn", n.turn},
                              {"outcome", n.outcome},
                              {"detail", n.detail}});
    }
    j["edges"] = json::array();
    for (const auto& e : g.edges) {
        j["edges"].push_back({{"from", e.from},
                              {"to", e.to},
                              {"kind", e.kind},
                              {"label", e.label},
                              {"move", e.move}});
    }
    return j.dump(2) + "\n";
}

}  // namespace

std::string export_graph(const StrategyGraph& g, GraphFormat format) {
    return format == GraphFormat::Dot ? to_dot(g) : to_json(g);
}

StrategyGraph parse_graph_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("graph JSON: ") + e.what());
    }
    if (j.value("schema", "") != "graph/1")
        throw std::invalid_argument("graph JSON: unsupported schema, expected graph/1");
    StrategyGraph g;
    try {
        g.root = j.at("root").get<std::string>();
        for (const auto& n : j.at("nodes")) {
            g.nodes.push_back({n.at("id").get<std::string>(), n.at("kind").get<std::string>(),
                               n.at("label").get<std::string>(), n.at("key").get<std::string>(),
                               n.at("turn").get<std::string>(), n.at("outcome").get<std::string>(),
                               n.at("detail").get<std::string>()});
        }
        for (const auto& e : j.at("edges")) {
            g.edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(),
                               e.at("kind").get<std::string>(), e.at("label").get<std::string>(),
                               e.at("move").get<std::string>()});
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("graph JSON: ") + e.what());
    }
    return g;
}

}  // namespace qarena::game
