#include "qarena/service.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "qarena/formula.hpp"
#include "qarena/puzzle.hpp"
#include "qarena/session.hpp"

namespace qarena::service {

using json = nlohmann::ordered_json;

namespace {

Response json_response(int status, const json& body) { return {status, "application/json", body.dump()}; }

Response error_response(int status, const std::string& code, const std::string& message) {
    return json_response(status, {{"error", code}, {"message", message}});
}

json parse_body(std::string_view body) {
    try {
        return json::parse(body.empty() ? std::string_view("{}") : body);
    } catch (const json::parse_error& e) {
        throw request_error(400, "invalid_json", std::string("body is not valid JSON: ") + e.what());
    }
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        const auto slash = path.find('/', start);
        const auto end = slash == std::string_view::npos ? path.size() : slash;
        if (end > start) parts.emplace_back(path.substr(start, end - start));
        if (slash == std::string_view::npos) break;
        start = slash + 1;
    }
    return parts;
}

game::GraphFormat graph_format(const std::string& text) {
    if (text == "dot") return game::GraphFormat::Dot;
    if (text == "json") return game::GraphFormat::Json;
    throw request_error(400, "invalid_format", "format must be dot or json");
}

Response graph_response(game::GraphFormat format, std::string body) {
    return {200, format == game::GraphFormat::Dot ? "text/vnd.graphviz; charset=utf-8" : "application/json",
            std::move(body)};
}

bool truthy(const std::string& v) { return v == "1" || v == "true" || v == "yes"; }

Response solve(const json& body) {
    puzzle::PuzzleRequest r;
    for (const auto& [key, value] : body.items()) {
        if (key == "fen" && value.is_string())
            r.fen = value.get<std::string>();
        else if (key == "tokens" && value.is_number_integer())
            r.tokens = value.get<int>();
        else if (key == "depth" && value.is_number_integer())
            r.depth = value.get<int>();
        else if (key == "refutations" && value.is_boolean())
            r.refutations = value.get<bool>();
        else if (key == "key" && value.is_string())
            r.key = value.get<std::string>();
        else if (key != "format")
            throw request_error(400, "invalid_request", "unexpected or mistyped field '" + key + "'");
    }
    if (r.depth > 8) throw request_error(400, "invalid_request", "depth must be at most 8");
    try {
        if (body.contains("format")) {
            if (!body["format"].is_string()) throw request_error(400, "invalid_format", "format must be dot or json");
            const auto format = graph_format(body["format"].get<std::string>());
            return graph_response(format, puzzle::puzzle_graph(r, format));
        }
        const auto s = puzzle::solve_puzzle(r);
        json winning = json::array();
        for (const auto& w : s.winning) winning.push_back({{"move", w.move}, {"label", w.label}});
        return json_response(200, {{"schema", "solve/1"},
                                   {"forced", s.result.forced},
                                   {"depth", s.result.depth_limit},
                                   {"minimal_depth", s.result.minimal_depth ? json(*s.result.minimal_depth) : json()},
                                   {"winning_moves", winning},
                                   {"summary", s.summary},
                                   {"nodes", s.result.nodes}});
    } catch (const game::not_forced_error& e) {
        throw request_error(422, "not_forced", e.what());
    } catch (const game::budget_exceeded& e) {
        throw request_error(422, "budget_exceeded", e.what());
    } catch (const request_error&) {
        throw;
    } catch (const std::invalid_argument& e) {
        const bool bad_key = r.key && std::string(e.what()).find(*r.key) != std::string::npos;
        throw request_error(bad_key ? 422 : 400, bad_key ? "bad_key" : "invalid_request", e.what());
    }
}

Response negate(const json& body) {
    if (!body.contains("text") || !body["text"].is_string())
        throw request_error(400, "invalid_request", "expected {\"text\": formula}");
    for (const auto& [key, value] : body.items())
        if (key != "text" && key != "absorb") throw request_error(400, "invalid_request", "unexpected field '" + key + "'");
    const bool absorb = body.value("absorb", false);
    formula::Formula f;
    try {
        f = formula::parse_formula(body["text"].get<std::string>());
    } catch (const formula::syntax_error& e) {
        return json_response(400, {{"error", "syntax_error"},
                                   {"message", e.what()},
                                   {"line", e.line()},
                                   {"column", e.column()}});
    }
    const auto n = formula::negate(f, {absorb});
    return json_response(200, {{"schema", "negation/1"},
                               {"input", formula::render(f)},
                               {"negation", formula::render(n)},
                               {"unicode", formula::render(n, formula::Style::Unicode)},
                               {"scheme", formula::scheme_of(f)},
                               {"negation_scheme", formula::scheme_of(n)}});
}

}  // namespace

std::string replay_events(const std::string& id, const std::vector<std::string>& lines) {
    if (lines.empty()) throw std::runtime_error("empty event log for " + id);
    const auto create = json::parse(lines.front());
    if (create.value("event", "") != "create") throw std::runtime_error("event log of " + id + " does not start with create");
    Session s(id, create["config"].dump());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto e = json::parse(lines[i]);
        if (e.value("event", "") != "move") throw std::runtime_error("unknown event in log of " + id);
        s.move(e["request"].dump());
    }
    return s.snapshot_json();
}

struct Service::Impl {
    struct Entry {
        mutable std::mutex mutex;
        std::optional<Session> session;
        std::vector<std::string> events;
    };

    std::optional<std::filesystem::path> dir;
    mutable std::shared_mutex index_mutex;
    std::map<std::string, std::shared_ptr<Entry>> sessions;
    long long next_id = 1;
    std::vector<std::string> load_errors;

    std::shared_ptr<Entry> find(const std::string& id) const {
        std::shared_lock lock(index_mutex);
        const auto it = sessions.find(id);
        if (it == sessions.end()) throw request_error(404, "unknown_session", "no session " + id);
        return it->second;
    }

    void append(const std::string& id, Entry& e, const std::string& line) {
        if (dir) {
            std::ofstream out(*dir / (id + ".jsonl"), std::ios::app | std::ios::binary);
            out << line << '\n';
            out.flush();
            if (!out) throw std::runtime_error("cannot write event log for " + id);
        }
        e.events.push_back(line);
    }

    void load() {
        std::filesystem::create_directories(*dir);
        std::vector<std::filesystem::path> logs;
        for (const auto& f : std::filesystem::directory_iterator(*dir))
            if (f.path().extension() == ".jsonl") logs.push_back(f.path());
        std::sort(logs.begin(), logs.end());
        for (const auto& path : logs) {
            const auto id = path.stem().string();
            try {
                std::ifstream in(path, std::ios::binary);
                auto entry = std::make_shared<Entry>();
                for (std::string line; std::getline(in, line);)
                    if (!line.empty()) entry->events.push_back(line);
                const auto create = json::parse(entry->events.at(0));
                entry->session.emplace(id, create["config"].dump());
                for (std::size_t i = 1; i < entry->events.size(); ++i)
                    entry->session->move(json::parse(entry->events[i])["request"].dump());
                sessions.emplace(id, entry);
                if (id.size() > 1 && id[0] == 's') {
                    try {
                        next_id = std::max(next_id, std::stoll(id.substr(1)) + 1);
                    } catch (const std::exception&) {
                    }
                }
            } catch (const std::exception& e) {
                load_errors.push_back(path.filename().string() + ": " + e.what());
            }
        }
    }

    Response create(const json& config) {
        auto entry = std::make_shared<Entry>();
        std::string id;
        {
            std::unique_lock lock(index_mutex);
            std::ostringstream name;
            name << 's' << std::setw(6) << std::setfill('0') << next_id++;
            id = name.str();
        }
        entry->session.emplace(id, config.dump());
        const json event = {{"event", "create"}, {"config", json::parse(entry->session->config_json())}};
        append(id, *entry, event.dump());
        {
            std::unique_lock lock(index_mutex);
            sessions.emplace(id, entry);
        }
        const int status = entry->session->warning() ? 422 : 201;
        return {status, "application/json", entry->session->snapshot_json()};
    }

    Response move(const std::string& id, std::string_view body) {
        auto entry = find(id);
        std::lock_guard lock(entry->mutex);
        const auto request = parse_body(body);
        entry->session->move(request.dump());
        append(id, *entry, json({{"event", "move"}, {"request", request}}).dump());
        return {200, "application/json", entry->session->snapshot_json()};
    }

    Response route(std::string_view method, std::string_view path, std::string_view body, const Query& query) {
        const auto parts = split_path(path);
        if (parts.size() < 2 || parts[0] != "api") throw request_error(404, "not_found", "no route " + std::string(path));
        const auto allow = [&](std::string_view expected) {
            if (method != expected)
                throw request_error(405, "method_not_allowed", std::string(method) + " not allowed on " + std::string(path));
        };
        const auto& head = parts[1];
        if (head == "health" && parts.size() == 2) {
            allow("GET");
            return json_response(200, {{"status", "ok"}});
        }
        if (head == "solve" && parts.size() == 2) {
            allow("POST");
            return solve(parse_body(body));
        }
        if (head == "formula" && parts.size() == 3 && parts[2] == "negate") {
            allow("POST");
            return negate(parse_body(body));
        }
        if (head == "sessions") {
            if (parts.size() == 2) {
                if (method == "GET") {
                    json ids = json::array();
                    std::shared_lock lock(index_mutex);
                    for (const auto& [sid, e] : sessions) ids.push_back(sid);
                    return json_response(200, {{"sessions", ids}});
                }
                allow("POST");
                return create(parse_body(body));
            }
            const auto& id = parts[2];
            if (parts.size() == 3) {
                allow("GET");
                auto entry = find(id);
                std::lock_guard lock(entry->mutex);
                return {200, "application/json", entry->session->snapshot_json()};
            }
            if (parts.size() == 4 && parts[3] == "moves") {
                allow("POST");
                return move(id, body);
            }
            if (parts.size() == 4 && parts[3] == "graph") {
                allow("GET");
                const auto get = [&](const char* k) {
                    const auto it = query.find(k);
                    return it == query.end() ? std::optional<std::string>() : std::optional<std::string>(it->second);
                };
                const auto format = graph_format(get("format").value_or("json"));
                auto entry = find(id);
                std::lock_guard lock(entry->mutex);
                try {
                    return graph_response(format, entry->session->graph(format, truthy(get("refutations").value_or("")),
                                                                         get("key")));
                } catch (const game::budget_exceeded& e) {
                    throw request_error(422, "budget_exceeded", e.what());
                }
            }
        }
        throw request_error(404, "not_found", "no route " + std::string(path));
    }
};

Service::Service(std::optional<std::filesystem::path> data_dir) : impl_(std::make_unique<Impl>()) {
    impl_->dir = std::move(data_dir);
    if (impl_->dir) impl_->load();
}

Service::~Service() = default;

Response Service::handle(std::string_view method, std::string_view path, std::string_view body, const Query& query) {
    try {
        return impl_->route(method, path, body, query);
    } catch (const request_error& e) {
        return error_response(e.status(), e.code(), e.what());
    } catch (const std::exception& e) {
        return error_response(500, "internal", e.what());
    }
}

std::vector<std::string> Service::session_ids() const {
    std::shared_lock lock(impl_->index_mutex);
    std::vector<std::string> ids;
    for (const auto& [id, e] : impl_->sessions) ids.push_back(id);
    return ids;
}

std::vector<std::string> Service::events(const std::string& id) const {
    auto entry = impl_->find(id);
    std::lock_guard lock(entry->mutex);
    return entry->events;
}

std::string Service::replayed_snapshot(const std::string& id) const { return replay_events(id, events(id)); }

const std::vector<std::string>& Service::load_errors() const { return impl_->load_errors; }

}  // namespace qarena::service
