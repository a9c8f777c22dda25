#pragma once

// A game in progress against (or between) humans: chess mate-in-k, Bachet,
// or a limit game. Configs, moves and snapshots are JSON text.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qarena/game.hpp"

namespace qarena::service {

/// Rejected request. `status` follows HTTP: 400 malformed, 404 unknown
/// session, 409 not the human's turn, 422 illegal or unsolvable.
class request_error : public std::runtime_error {
public:
    request_error(int status, std::string code, const std::string& what)
        : std::runtime_error(what), status_(status), code_(std::move(code)) {}
    int status() const noexcept { return status_; }
    const std::string& code() const noexcept { return code_; }

private:
    int status_;
    std::string code_;
};

class Session {
public:
    /// Config: {"backend": "chess"|"bachet"|"limit"|"limit-divergence",
    /// "human": "verifier"|"falsifier"|"both", ...backend fields}. Engine
    /// moves are played up to the first human decision.
    Session(std::string id, std::string_view config_json);
    ~Session();
    Session(Session&&) noexcept;
    Session& operator=(Session&&) noexcept;

    const std::string& id() const;
    /// The config with defaults filled in; replaying it reproduces the opening.
    std::string config_json() const;

    /// {"move": "..."} with optional "player". Applies the human move, then
    /// the engine's replies.
    void move(std::string_view move_json);

    /// Set when the engine role cannot be won from the start position.
    const std::optional<std::string>& warning() const;

    std::string snapshot_json() const;

    /// Strategy graph from the current position (chess, Bachet) or the
    /// play so far (limit games).
    std::string graph(game::GraphFormat format, bool refutations, const std::optional<std::string>& key) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace qarena::service
