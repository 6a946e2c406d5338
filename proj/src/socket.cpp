#include "pretouch/socket.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <charconv>
#include <utility>

namespace pretouch::net {

namespace {

[[noreturn]] void fail(const std::string& what) {
    const int code = errno;
    throw SocketError(what + ": " + std::strerror(code), code);
}

sockaddr_in resolve(const std::string& host, int port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    const std::string h = host.empty() || host == "localhost" ? "127.0.0.1" : host;
    if (inet_pton(AF_INET, h.c_str(), &addr.sin_addr) == 1) return addr;
    addrinfo hints{};
    hints.ai_family = AF_INET;
    addrinfo* res = nullptr;
    if (getaddrinfo(h.c_str(), nullptr, &hints, &res) != 0 || !res)
        throw SocketError("cannot resolve host " + host, EHOSTUNREACH);
    addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
    freeaddrinfo(res);
    return addr;
}

}  // namespace

Socket::~Socket() { close(); }

Socket& Socket::operator=(Socket&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

void Socket::send_all(std::string_view data) const {
    while (!data.empty()) {
        const ssize_t n = ::send(fd_, data.data(), data.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail("send");
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

std::size_t Socket::receive(char* buffer, std::size_t size) const {
    while (true) {
        const ssize_t n = ::recv(fd_, buffer, size, 0);
        if (n >= 0) return static_cast<std::size_t>(n);
        if (errno == EINTR) continue;
        if (errno == ECONNRESET || errno == EBADF || errno == ENOTCONN) return 0;
        fail("recv");
    }
}

void Socket::shutdown() const {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void Socket::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

std::pair<Socket, int> listen_tcp(const std::string& host, int port) {
    Socket s(::socket(AF_INET, SOCK_STREAM, 0));
    if (!s.valid()) fail("socket");
    const int one = 1;
    ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr = resolve(host, port);
    if (::bind(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) fail("bind " + host);
    if (::listen(s.fd(), 64) < 0) fail("listen");
    socklen_t len = sizeof addr;
    ::getsockname(s.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
    return {std::move(s), ntohs(addr.sin_port)};
}

Socket accept_tcp(const Socket& listener) {
    while (true) {
        const int fd = ::accept(listener.fd(), nullptr, nullptr);
        if (fd >= 0) {
            const int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return Socket(fd);
        }
        if (errno == EINTR) continue;
        fail("accept");
    }
}

Socket connect_tcp(const std::string& host, int port) {
    Socket s(::socket(AF_INET, SOCK_STREAM, 0));
    if (!s.valid()) fail("socket");
    sockaddr_in addr = resolve(host, port);
    if (::connect(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0)
        fail("connect " + host + ":" + std::to_string(port));
    const int one = 1;
    ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return s;
}

std::pair<std::string, int> parse_host_port(std::string_view text) {
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("expected host:port, got '" + std::string(text) + "'");
    int port = 0;
    const auto digits = text.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || port < 0 || port > 65535)
        throw std::invalid_argument("bad port in '" + std::string(text) + "'");
    return {std::string(text.substr(0, colon)), port};
}

bool LineReader::fill() {
    if (pos_ > 0 && pos_ == buffer_.size()) {
        buffer_.clear();
        pos_ = 0;
    }
    char chunk[4096];
    const std::size_t n = socket_.receive(chunk, sizeof chunk);
    if (n == 0) return false;
    buffer_.append(chunk, n);
    return true;
}

std::optional<std::string> LineReader::next_line() {
    while (true) {
        const auto nl = buffer_.find('\n', pos_);
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(pos_, nl - pos_);
            pos_ = nl + 1;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        if (!fill()) {
            if (pos_ >= buffer_.size()) return std::nullopt;
            std::string rest = buffer_.substr(pos_);
            pos_ = buffer_.size();
            return rest;
        }
    }
}

std::optional<std::string> LineReader::read_exact(std::size_t n) {
    while (buffer_.size() - pos_ < n)
        if (!fill()) return std::nullopt;
    std::string out = buffer_.substr(pos_, n);
    pos_ += n;
    return out;
}

}  // namespace pretouch::net
