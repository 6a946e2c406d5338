#include "pretouch/wire.hpp"

#include "pretouch/json_io.hpp"

namespace pretouch::wire {

WireError::WireError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

std::string_view to_string(ControlAction action) {
    switch (action) {
        case ControlAction::Start: return "start";
        case ControlAction::Reset: return "reset";
        case ControlAction::Cancel: return "cancel";
        case ControlAction::Submit: return "submit";
    }
    return "?";
}

namespace {

ControlAction parse_action(std::string_view text) {
    for (auto a : {ControlAction::Start, ControlAction::Reset, ControlAction::Cancel, ControlAction::Submit})
        if (to_string(a) == text) return a;
    throw std::invalid_argument("unknown action '" + std::string(text) + "'");
}

Json vec3(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

struct Tag {
    std::string_view operator()(const Sample&) const { return "SAMPLE"; }
    std::string_view operator()(const Control&) const { return "CONTROL"; }
    std::string_view operator()(const Render&) const { return "RENDER"; }
    std::string_view operator()(const Result&) const { return "RESULT"; }
    std::string_view operator()(const Error&) const { return "ERROR"; }
};

struct Encoder {
    Json& j;

    void operator()(const Sample& m) const {
        j["t"] = m.t;
        j["finger"] = vec3(m.finger);
        j["pose"] = to_json(m.pose);
        j["touch"] = m.touch;
        if (m.session) j["session"] = *m.session;
    }
    void operator()(const Control& m) const {
        j["action"] = to_string(m.action);
        j["technique"] = to_string(m.technique);
        j["feedback_mode"] = to_string(m.feedback_mode);
        if (m.secret) j["secret"] = *m.secret;
        if (m.session) j["session"] = *m.session;
        j["t_start"] = m.t_start;
    }
    void operator()(const Render& m) const {
        j["cursor"] = to_json(m.cursor);
        j["selected_count"] = m.selected_count;
        Json lines = Json::array();
        for (const auto& [a, b] : m.lines) lines.push_back({a, b});
        j["lines"] = lines;
        j["haptic"] = m.haptic;
    }
    void operator()(const Result& m) const {
        j["outcome"] = to_string(m.outcome);
        j["metrics"] = {{"entry_time_ms", m.metrics.entry_time_ms},
                        {"time_from_first_ms", m.metrics.time_from_first_ms}};
        if (m.entered) j["entered"] = *m.entered;
        if (m.events) {
            Json ev = Json::array();
            for (const auto& e : *m.events) ev.push_back({e.t, e.digit, e.haptic});
            j["events"] = ev;
        }
        if (m.violations) {
            Json v = Json::array();
            for (const auto& e : *m.violations) v.push_back(to_json(e));
            j["violations"] = v;
        }
        if (m.log) j["log"] = to_json(*m.log);
    }
    void operator()(const Error& m) const {
        j["field"] = m.field;
        j["message"] = m.message;
        if (m.ref_seq) j["ref_seq"] = *m.ref_seq;
    }
};

// Runs `fn` and rethrows any parse failure as a WireError on `field`.
template <typename Fn>
auto in_field(const char* field, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const WireError&) {
        throw;
    } catch (const std::exception& e) {
        throw WireError(field, e.what());
    }
}

const Json& require(const Json& j, const char* key) {
    if (!j.contains(key)) throw WireError(key, "missing");
    return j.at(key);
}

std::uint64_t unsigned_field(const Json& j) {
    if (!j.is_number_unsigned()) throw std::invalid_argument("expected a non-negative integer");
    return j.get<std::uint64_t>();
}

Vec3 parse_vec3(const Json& j, const char* field) {
    return in_field(field, [&] {
        if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected 3 numbers");
        return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    });
}

Sample parse_sample(const Json& j) {
    Sample m;
    m.t = in_field("t", [&] { return require(j, "t").get<double>(); });
    m.finger = parse_vec3(require(j, "finger"), "finger");
    m.pose = in_field("pose", [&] { return pose_from_json(require(j, "pose")); });
    if (j.contains("touch")) m.touch = in_field("touch", [&] { return j.at("touch").get<bool>(); });
    if (j.contains("session")) m.session = in_field("session", [&] { return j.at("session").get<std::string>(); });
    return m;
}

Control parse_control(const Json& j) {
    Control m;
    m.action = in_field("action", [&] { return parse_action(require(j, "action").get<std::string>()); });
    if (j.contains("technique"))
        m.technique = in_field("technique", [&] { return parse_technique(j.at("technique").get<std::string>()); });
    if (j.contains("feedback_mode"))
        m.feedback_mode =
            in_field("feedback_mode", [&] { return parse_feedback_mode(j.at("feedback_mode").get<std::string>()); });
    if (j.contains("secret")) m.secret = in_field("secret", [&] { return j.at("secret").get<std::vector<int>>(); });
    if (j.contains("session")) m.session = in_field("session", [&] { return j.at("session").get<std::string>(); });
    if (j.contains("t_start")) m.t_start = in_field("t_start", [&] { return j.at("t_start").get<double>(); });
    return m;
}

Render parse_render(const Json& j) {
    Render m;
    m.cursor = in_field("cursor", [&] { return cursor_from_json(require(j, "cursor")); });
    m.selected_count = in_field("selected_count", [&] { return static_cast<std::size_t>(unsigned_field(require(j, "selected_count"))); });
    m.lines = in_field("lines", [&] {
        FeedbackLines lines;
        for (const auto& l : require(j, "lines")) lines.emplace_back(l.at(0).get<int>(), l.at(1).get<int>());
        return lines;
    });
    m.haptic = in_field("haptic", [&] { return require(j, "haptic").get<bool>(); });
    return m;
}

Result parse_result(const Json& j) {
    Result m;
    m.outcome = in_field("outcome", [&] { return parse_outcome(require(j, "outcome").get<std::string>()); });
    m.metrics = in_field("metrics", [&] {
        const Json& v = require(j, "metrics");
        return SessionMetrics{v.at("entry_time_ms").get<double>(), v.at("time_from_first_ms").get<double>()};
    });
    if (j.contains("entered")) m.entered = in_field("entered", [&] { return j.at("entered").get<std::vector<int>>(); });
    if (j.contains("events"))
        m.events = in_field("events", [&] {
            std::vector<SelectionEvent> events;
            for (const auto& e : j.at("events")) events.push_back({e.at(0).get<double>(), e.at(1).get<int>(), e.at(2).get<bool>()});
            return events;
        });
    if (j.contains("violations"))
        m.violations = in_field("violations", [&] {
            std::vector<ValidationError> v;
            for (const auto& e : j.at("violations")) v.push_back(validation_error_from_json(e));
            return v;
        });
    if (j.contains("log")) m.log = in_field("log", [&] { return session_log_from_json(j.at("log")); });
    return m;
}

Error parse_error(const Json& j) {
    Error m{in_field("field", [&] { return require(j, "field").get<std::string>(); }),
            in_field("message", [&] { return require(j, "message").get<std::string>(); }), std::nullopt};
    if (j.contains("ref_seq")) m.ref_seq = in_field("ref_seq", [&] { return unsigned_field(j.at("ref_seq")); });
    return m;
}

}  // namespace

std::string_view tag_of(const Message& message) { return std::visit(Tag{}, message); }

std::string encode(const Envelope& envelope) {
    Json j{{"seq", envelope.seq}, {"type", tag_of(envelope.message)}};
    std::visit(Encoder{j}, envelope.message);
    return j.dump();
}

Envelope decode(std::string_view line) {
    Json j;
    try {
        j = Json::parse(line);
    } catch (const Json::parse_error& e) {
        throw WireError("record", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw WireError("record", "expected a JSON object");
    Envelope env;
    env.seq = in_field("seq", [&] { return unsigned_field(require(j, "seq")); });
    const std::string type = in_field("type", [&] { return require(j, "type").get<std::string>(); });
    if (type == "SAMPLE") env.message = parse_sample(j);
    else if (type == "CONTROL") env.message = parse_control(j);
    else if (type == "RENDER") env.message = parse_render(j);
    else if (type == "RESULT") env.message = parse_result(j);
    else if (type == "ERROR") env.message = parse_error(j);
    else throw WireError("type", "unknown message tag '" + type + "'");
    return env;
}

}  // namespace pretouch::wire
