#ifndef PRETOUCH_SOCKET_HPP
#define PRETOUCH_SOCKET_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pretouch::net {

class SocketError : public std::runtime_error {
public:
    SocketError(const std::string& what, int code) : std::runtime_error(what), code_(code) {}
    int code() const { return code_; }

private:
    int code_;
};

/// Owning TCP socket handle.
class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    ~Socket();
    Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    Socket& operator=(Socket&& other) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;

    int fd() const { return fd_; }
    bool valid() const { return fd_ >= 0; }

    void send_all(std::string_view data) const;
    /// Returns 0 on orderly shutdown.
    std::size_t receive(char* buffer, std::size_t size) const;
    /// Wakes any thread blocked on this socket.
    void shutdown() const;
    void close();

private:
    int fd_ = -1;
};

/// Binds and listens; port 0 picks an ephemeral port. Returns the socket
/// and the bound port.
std::pair<Socket, int> listen_tcp(const std::string& host, int port);
Socket accept_tcp(const Socket& listener);
/// Throws SocketError (code = errno) on failure.
Socket connect_tcp(const std::string& host, int port);

/// Splits "host:port"; throws std::invalid_argument.
std::pair<std::string, int> parse_host_port(std::string_view text);

/// Buffered reader over a socket.
class LineReader {
public:
    explicit LineReader(const Socket& socket) : socket_(socket) {}

    /// Next '\n'-terminated line without the terminator (a trailing '\r' is
    /// stripped). An unterminated final line is returned as is; nullopt at
    /// end of stream.
    std::optional<std::string> next_line();
    /// Exactly n bytes; nullopt if the stream ends first.
    std::optional<std::string> read_exact(std::size_t n);
    /// Bytes buffered but not yet consumed.
    std::string_view buffered() const { return std::string_view(buffer_).substr(pos_); }

private:
    bool fill();

    const Socket& socket_;
    std::string buffer_;
    std::size_t pos_ = 0;
};

}  // namespace pretouch::net

#endif  // PRETOUCH_SOCKET_HPP
