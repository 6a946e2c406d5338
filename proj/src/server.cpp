#include "pretouch/server.hpp"

#include <fstream>
#include <sstream>

#include "pretouch/websocket.hpp"

namespace pretouch::net {

namespace {

struct ConnectionClosed {};

}  // namespace

EngineServer::EngineServer(EngineSettings settings, std::optional<std::filesystem::path> static_dir)
    : engine_(std::make_unique<Engine>(std::move(settings),
                                       [this](ConnectionId to, const wire::Message& m) { send(to, m); })),
      static_dir_(std::move(static_dir)) {}

EngineServer::~EngineServer() { stop(); }

int EngineServer::bind(const std::string& host, int port) {
    auto [socket, bound] = listen_tcp(host, port);
    listener_ = std::move(socket);
    port_ = bound;
    return port_;
}

void EngineServer::start() {
    accept_thread_ = std::thread([this] { serve(); });
}

void EngineServer::serve() {
    while (!stopping_) {
        Socket client;
        try {
            client = accept_tcp(listener_);
        } catch (const SocketError&) {
            if (stopping_) break;
            continue;
        }
        auto conn = std::make_shared<Connection>();
        conn->socket = std::move(client);
        std::lock_guard lock(connections_mutex_);
        if (stopping_) break;
        conn->id = next_id_++;
        connections_[conn->id] = conn;
        workers_.emplace_back([this, conn] { run_connection(conn); });
    }
}

void EngineServer::stop() {
    if (stopping_.exchange(true)) return;
    listener_.shutdown();
    if (accept_thread_.joinable()) accept_thread_.join();
    std::vector<std::thread> workers;
    {
        std::lock_guard lock(connections_mutex_);
        for (auto& [id, conn] : connections_) conn->socket.shutdown();
        workers.swap(workers_);
    }
    for (auto& t : workers)
        if (t.joinable()) t.join();
    listener_.close();
}

void EngineServer::send(ConnectionId to, const wire::Message& message) {
    std::shared_ptr<Connection> conn;
    {
        std::lock_guard lock(connections_mutex_);
        const auto it = connections_.find(to);
        if (it == connections_.end()) return;
        conn = it->second;
    }
    send(*conn, message);
}

void EngineServer::send(Connection& conn, const wire::Message& message) {
    std::lock_guard lock(conn.write_mutex);
    if (!conn.open) return;
    const std::string record = wire::encode({++conn.out_seq, message});
    try {
        if (conn.framing == Framing::WebSocket)
            conn.socket.send_all(ws::encode_frame(ws::kText, record));
        else
            conn.socket.send_all(record + "\n");
    } catch (const SocketError&) {
        conn.open = false;
    }
}

void EngineServer::process_record(Connection& conn, std::string_view record, std::optional<std::uint64_t>& last_seq) {
    if (record.empty()) return;
    wire::Envelope env;
    try {
        env = wire::decode(record);
    } catch (const wire::WireError& e) {
        send(conn, wire::Error{e.field(), e.what(), std::nullopt});
        return;
    }
    if (last_seq && env.seq <= *last_seq) {
        send(conn, wire::Error{"seq", "sequence number regression; closing connection", env.seq});
        throw ConnectionClosed{};
    }
    last_seq = env.seq;
    engine_->handle(conn.id, env.seq, env.message);
}

void EngineServer::serve_static(Connection& conn, const std::string& target) {
    std::string path = target.substr(0, target.find('?'));
    if (path == "/") path = "/index.html";
    std::string status = "404 Not Found";
    std::string body = "not found\n";
    std::string type = "text/plain";
    if (static_dir_ && path.find("..") == std::string::npos) {
        std::ifstream in(*static_dir_ / path.substr(1), std::ios::binary);
        if (in) {
            std::ostringstream ss;
            ss << in.rdbuf();
            body = ss.str();
            status = "200 OK";
            const auto ext = std::filesystem::path(path).extension().string();
            type = ext == ".html" ? "text/html" : ext == ".js" ? "text/javascript" : ext == ".css" ? "text/css"
                                                                                                   : "application/octet-stream";
        }
    }
    std::ostringstream resp;
    resp << "HTTP/1.1 " << status << "\r\nContent-Type: " << type << "\r\nContent-Length: " << body.size()
         << "\r\nConnection: close\r\n\r\n"
         << body;
    std::lock_guard lock(conn.write_mutex);
    try {
        conn.socket.send_all(resp.str());
    } catch (const SocketError&) {
    }
}

void EngineServer::run_connection(std::shared_ptr<Connection> conn) {
    LineReader reader(conn->socket);
    std::optional<std::uint64_t> last_seq;
    try {
        auto first = reader.next_line();
        if (first && first->rfind("GET ", 0) == 0) {
            const auto request = read_http_request(*first, reader);
            if (request && request->wants_websocket()) {
                {
                    std::lock_guard lock(conn->write_mutex);
                    conn->socket.send_all("HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\n"
                                          "Connection: Upgrade\r\nSec-WebSocket-Accept: " +
                                          ws::accept_key(request->headers.at("sec-websocket-key")) + "\r\n\r\n");
                    conn->framing = Framing::WebSocket;
                }
                while (auto message = ws::read_message(reader, conn->socket)) process_record(*conn, *message, last_seq);
            } else if (request) {
                serve_static(*conn, request->target);
            }
        } else {
            for (auto line = std::move(first); line; line = reader.next_line()) process_record(*conn, *line, last_seq);
        }
    } catch (const ConnectionClosed&) {
    } catch (const SocketError&) {
    }
    {
        std::lock_guard lock(conn->write_mutex);
        conn->open = false;
    }
    engine_->disconnect(conn->id);
    conn->socket.shutdown();
    std::lock_guard lock(connections_mutex_);
    connections_.erase(conn->id);
}

}  // namespace pretouch::net
