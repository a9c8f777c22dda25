#pragma once

// HTTP JSON API over sessions, solving and formula negation. `handle` is
// transport-free; `serve` binds it to a socket.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qarena::service {

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

using Query = std::map<std::string, std::string>;

class Service {
public:
    /// With a data directory every session keeps an append-only JSON-lines
    /// event log there (<id>.jsonl), and existing logs are replayed.
    explicit Service(std::optional<std::filesystem::path> data_dir = std::nullopt);
    ~Service();

    Response handle(std::string_view method, std::string_view path, std::string_view body = {},
                    const Query& query = {});

    std::vector<std::string> session_ids() const;
    /// Event log lines of a session, oldest first.
    std::vector<std::string> events(const std::string& id) const;
    /// Snapshot of the session rebuilt from its event log alone.
    std::string replayed_snapshot(const std::string& id) const;
    /// Logs that could not be replayed at startup, with the reason.
    const std::vector<std::string>& load_errors() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Rebuilds a session snapshot from event-log lines.
std::string replay_events(const std::string& id, const std::vector<std::string>& lines);

/// HTTP binding of a Service.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();

    /// Binds host:port (port 0 picks a free one); returns the bound port or -1.
    int bind(const std::string& host, int port);
    /// Serves requests until stop() is called.
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace qarena::service
