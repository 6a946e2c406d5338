#ifndef PRETOUCH_ENGINE_HPP
#define PRETOUCH_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>

#include "pretouch/decoder.hpp"
#include "pretouch/json_io.hpp"
#include "pretouch/wire.hpp"

namespace pretouch::net {

using ConnectionId = std::uint64_t;

/// Delivers one outgoing message to a connection. Called with the session
/// lock held, so per-session output order is preserved.
using Sink = std::function<void(ConnectionId, const wire::Message&)>;

/// Transport-independent engine: owns the session registry and turns
/// incoming tracker/client messages into RENDER, RESULT and ERROR output.
///
/// Sessions are named. A message without a `session` key addresses the
/// sender's own default session, so a single connection can drive an entry
/// end to end; a tracker connection can instead feed a session started by a
/// separate client connection. RENDER and RESULT go to every connection that
/// sent CONTROL for the session.
class Engine {
public:
    Engine(EngineSettings settings, Sink sink);

    /// Processes one message in the sender's arrival order.
    void handle(ConnectionId from, std::uint64_t seq, const wire::Message& message);

    /// Drops the connection's subscriptions and its default session.
    void disconnect(ConnectionId id);

    std::size_t session_count() const;
    const EngineSettings& settings() const { return settings_; }

private:
    struct Slot {
        std::mutex mutex;
        std::optional<DecodeSession> session;
        DecoderConfig config;
        Code secret;
        double t_start = 0.0;
        std::set<ConnectionId> subscribers;
    };

    std::string session_key(ConnectionId from, const std::optional<std::string>& name) const;
    std::shared_ptr<Slot> find(const std::string& key) const;
    void on_control(ConnectionId from, std::uint64_t seq, const wire::Control& control);
    void on_sample(ConnectionId from, std::uint64_t seq, const wire::Sample& sample);
    void publish_result(Slot& slot);
    void error(ConnectionId to, std::uint64_t seq, std::string field, std::string message);

    EngineSettings settings_;
    Sink sink_;
    mutable std::mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> registry_;
};

/// Empty render state sent after a reset.
wire::Render idle_render();

}  // namespace pretouch::net

#endif  // PRETOUCH_ENGINE_HPP
