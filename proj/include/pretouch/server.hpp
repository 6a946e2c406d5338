#ifndef PRETOUCH_SERVER_HPP
#define PRETOUCH_SERVER_HPP

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pretouch/engine.hpp"
#include "pretouch/socket.hpp"

namespace pretouch::net {

/// Environment variable overriding the bind address ("host:port").
inline constexpr const char* kBindEnv = "PRETOUCH_BIND";

/// TCP front end for Engine. Each connection gets its own thread and is
/// processed strictly in arrival order. The first bytes decide the framing:
/// newline-delimited JSON records, or an HTTP request that is either a
/// WebSocket upgrade (same records in text frames) or a static file GET.
class EngineServer {
public:
    explicit EngineServer(EngineSettings settings, std::optional<std::filesystem::path> static_dir = std::nullopt);
    ~EngineServer();

    EngineServer(const EngineServer&) = delete;
    EngineServer& operator=(const EngineServer&) = delete;

    /// Binds and returns the actual port (useful with port 0).
    int bind(const std::string& host, int port);
    /// Runs the accept loop on a background thread.
    void start();
    /// Blocks in the accept loop until stop().
    void serve();
    void stop();

    int port() const { return port_; }
    const Engine& engine() const { return *engine_; }

private:
    enum class Framing { Lines, WebSocket };

    struct Connection {
        ConnectionId id = 0;
        Socket socket;
        Framing framing = Framing::Lines;
        std::mutex write_mutex;
        std::uint64_t out_seq = 0;
        bool open = true;
    };

    void run_connection(std::shared_ptr<Connection> conn);
    void process_record(Connection& conn, std::string_view record, std::optional<std::uint64_t>& last_seq);
    void send(ConnectionId to, const wire::Message& message);
    void send(Connection& conn, const wire::Message& message);
    void serve_static(Connection& conn, const std::string& target);

    std::unique_ptr<Engine> engine_;
    std::optional<std::filesystem::path> static_dir_;
    Socket listener_;
    int port_ = 0;
    std::atomic<bool> stopping_{false};
    std::thread accept_thread_;

    std::mutex connections_mutex_;
    std::map<ConnectionId, std::shared_ptr<Connection>> connections_;
    std::vector<std::thread> workers_;
    ConnectionId next_id_ = 1;
};

}  // namespace pretouch::net

#endif  // PRETOUCH_SERVER_HPP
