#ifndef PRETOUCH_WEBSOCKET_HPP
#define PRETOUCH_WEBSOCKET_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "pretouch/socket.hpp"

namespace pretouch::net {

/// Minimal RFC 6455 support: enough for a browser client exchanging text
/// frames carrying the same JSON records as the line transport.
namespace ws {

inline constexpr int kText = 0x1;
inline constexpr int kContinuation = 0x0;
inline constexpr int kClose = 0x8;
inline constexpr int kPing = 0x9;
inline constexpr int kPong = 0xA;

/// Sec-WebSocket-Accept value for a client key.
std::string accept_key(std::string_view client_key);

struct Frame {
    bool fin = true;
    int opcode = kText;
    std::string payload;
};

/// Server frames are unmasked; clients must mask.
std::string encode_frame(int opcode, std::string_view payload, std::optional<std::uint32_t> mask = std::nullopt);

/// nullopt at end of stream.
std::optional<Frame> read_frame(LineReader& reader);

/// Reads frames until a complete text message, answering pings; nullopt on
/// close or end of stream.
std::optional<std::string> read_message(LineReader& reader, const Socket& socket);

}  // namespace ws

/// Parsed HTTP request head.
struct HttpRequest {
    std::string method;
    std::string target;
    std::map<std::string, std::string> headers;  ///< lowercase names

    bool wants_websocket() const;
};

/// Reads the rest of a request head whose first line is already consumed.
std::optional<HttpRequest> read_http_request(std::string_view request_line, LineReader& reader);

}  // namespace pretouch::net

#endif  // PRETOUCH_WEBSOCKET_HPP
