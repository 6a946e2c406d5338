#include "pretouch/websocket.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <openssl/evp.h>
#include <openssl/sha.h>

namespace pretouch::net {

namespace ws {

std::string accept_key(std::string_view client_key) {
    const std::string input = std::string(client_key) + "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
    unsigned char digest[SHA_DIGEST_LENGTH];
    SHA1(reinterpret_cast<const unsigned char*>(input.data()), input.size(), digest);
    unsigned char encoded[4 * ((SHA_DIGEST_LENGTH + 2) / 3) + 1];
    const int n = EVP_EncodeBlock(encoded, digest, SHA_DIGEST_LENGTH);
    return std::string(reinterpret_cast<char*>(encoded), static_cast<std::size_t>(n));
}

std::string encode_frame(int opcode, std::string_view payload, std::optional<std::uint32_t> mask) {
    std::string out;
    out.push_back(static_cast<char>(0x80 | (opcode & 0x0F)));
    const std::uint8_t mask_bit = mask ? 0x80 : 0x00;
    const std::uint64_t len = payload.size();
    if (len < 126) {
        out.push_back(static_cast<char>(mask_bit | len));
    } else if (len <= 0xFFFF) {
        out.push_back(static_cast<char>(mask_bit | 126));
        out.push_back(static_cast<char>((len >> 8) & 0xFF));
        out.push_back(static_cast<char>(len & 0xFF));
    } else {
        out.push_back(static_cast<char>(mask_bit | 127));
        for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((len >> shift) & 0xFF));
    }
    if (!mask) {
        out.append(payload);
        return out;
    }
    const char key[4] = {static_cast<char>(*mask >> 24), static_cast<char>(*mask >> 16), static_cast<char>(*mask >> 8),
                         static_cast<char>(*mask)};
    out.append(key, 4);
    for (std::size_t i = 0; i < payload.size(); ++i) out.push_back(static_cast<char>(payload[i] ^ key[i % 4]));
    return out;
}

std::optional<Frame> read_frame(LineReader& reader) {
    const auto head = reader.read_exact(2);
    if (!head) return std::nullopt;
    const auto b0 = static_cast<std::uint8_t>((*head)[0]);
    const auto b1 = static_cast<std::uint8_t>((*head)[1]);
    Frame frame;
    frame.fin = (b0 & 0x80) != 0;
    frame.opcode = b0 & 0x0F;
    std::uint64_t len = b1 & 0x7F;
    if (len >= 126) {
        const auto ext = reader.read_exact(len == 126 ? 2 : 8);
        if (!ext) return std::nullopt;
        len = 0;
        for (char c : *ext) len = (len << 8) | static_cast<std::uint8_t>(c);
    }
    std::string key;
    if (b1 & 0x80) {
        const auto k = reader.read_exact(4);
        if (!k) return std::nullopt;
        key = *k;
    }
    auto payload = reader.read_exact(static_cast<std::size_t>(len));
    if (!payload) return std::nullopt;
    if (!key.empty())
        for (std::size_t i = 0; i < payload->size(); ++i) (*payload)[i] = static_cast<char>((*payload)[i] ^ key[i % 4]);
    frame.payload = std::move(*payload);
    return frame;
}

std::optional<std::string> read_message(LineReader& reader, const Socket& socket) {
    std::string message;
    while (true) {
        auto frame = read_frame(reader);
        if (!frame) return std::nullopt;
        switch (frame->opcode) {
            case kPing: socket.send_all(encode_frame(kPong, frame->payload)); continue;
            case kPong: continue;
            case kClose: socket.send_all(encode_frame(kClose, "")); return std::nullopt;
            default: break;
        }
        message += frame->payload;
        if (frame->fin) return message;
    }
}

}  // namespace ws

bool HttpRequest::wants_websocket() const {
    const auto it = headers.find("upgrade");
    if (it == headers.end()) return false;
    std::string value = it->second;
    std::transform(value.begin(), value.end(), value.begin(), [](unsigned char c) { return std::tolower(c); });
    return value == "websocket" && headers.count("sec-websocket-key") > 0;
}

std::optional<HttpRequest> read_http_request(std::string_view request_line, LineReader& reader) {
    HttpRequest req;
    std::istringstream first{std::string(request_line)};
    first >> req.method >> req.target;
    while (true) {
        auto line = reader.next_line();
        if (!line) return std::nullopt;
        if (line->empty()) break;
        const auto colon = line->find(':');
        if (colon == std::string::npos) continue;
        std::string name = line->substr(0, colon);
        std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
        std::string value = line->substr(colon + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        value.erase(value.find_last_not_of(" \t") + 1);
        req.headers[name] = value;
    }
    return req;
}

}  // namespace pretouch::net
