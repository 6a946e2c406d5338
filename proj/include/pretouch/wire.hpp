#ifndef PRETOUCH_WIRE_HPP
#define PRETOUCH_WIRE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pretouch/decoder.hpp"
#include "pretouch/geometry.hpp"
#include "pretouch/grid.hpp"

namespace pretouch::wire {

/// Tracker -> engine. `finger` is in the world frame; `pose` is the phone
/// pose at the same instant.
struct Sample {
    double t = 0.0;
    Vec3 finger;
    PhonePose pose;
    bool touch = false;
    std::optional<std::string> session;

    bool operator==(const Sample&) const = default;
};

enum class ControlAction { Start, Reset, Cancel, Submit };

std::string_view to_string(ControlAction action);

struct Control {
    ControlAction action = ControlAction::Start;
    Technique technique = Technique::Pattern3D;
    FeedbackMode feedback_mode = FeedbackMode::WithoutFeedback;
    std::optional<std::vector<int>> secret;
    std::optional<std::string> session;
    double t_start = 0.0;

    bool operator==(const Control&) const = default;
};

/// Engine -> client, one per processed sample.
struct Render {
    CursorState cursor;
    std::size_t selected_count = 0;
    FeedbackLines lines;
    bool haptic = false;

    bool operator==(const Render&) const = default;
};

/// Engine -> client on submission. The debug fields are only populated when
/// the engine runs in debug mode.
struct Result {
    Outcome outcome = Outcome::RejectedInvalidPattern;
    SessionMetrics metrics;
    std::optional<std::vector<int>> entered;
    std::optional<std::vector<SelectionEvent>> events;
    std::optional<std::vector<ValidationError>> violations;
    std::optional<SessionLog> log;

    bool operator==(const Result&) const = default;
};

struct Error {
    std::string field;
    std::string message;
    /// Sequence number of the offending incoming message, when known.
    std::optional<std::uint64_t> ref_seq;

    bool operator==(const Error&) const = default;
};

using Message = std::variant<Sample, Control, Render, Result, Error>;

std::string_view tag_of(const Message& message);

struct Envelope {
    std::uint64_t seq = 0;
    Message message;

    bool operator==(const Envelope&) const = default;
};

/// A malformed record; `field` names the offending key ("type" for an
/// unknown tag, "record" for broken JSON).
class WireError : public std::invalid_argument {
public:
    WireError(std::string field, const std::string& message);
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// One JSON object without the trailing newline.
std::string encode(const Envelope& envelope);
/// Throws WireError.
Envelope decode(std::string_view line);

}  // namespace pretouch::wire

#endif  // PRETOUCH_WIRE_HPP
