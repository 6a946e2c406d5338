#include "pretouch/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace pretouch {

namespace {

Json vec2(const Vec2& v) { return Json::array({v.x, v.y}); }
Vec2 vec2(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

template <typename T>
void read_if(const Json& j, const char* key, T& field) {
    if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

Json to_json(const RuleSet& rules) {
    return {{"required_length", rules.required_length},
            {"start_top_layer", rules.start_top_layer},
            {"max_cross_layer_sq_dist", rules.max_cross_layer_sq_dist},
            {"bypass_policy", to_string(rules.bypass_policy)},
            {"bypass_scope", to_string(rules.bypass_scope)}};
}

RuleSet rules_from_json(const Json& j) {
    RuleSet rules;
    read_if(j, "required_length", rules.required_length);
    read_if(j, "start_top_layer", rules.start_top_layer);
    read_if(j, "max_cross_layer_sq_dist", rules.max_cross_layer_sq_dist);
    if (j.contains("bypass_policy")) rules.bypass_policy = parse_bypass_policy(j.at("bypass_policy").get<std::string>());
    if (j.contains("bypass_scope")) rules.bypass_scope = parse_bypass_scope(j.at("bypass_scope").get<std::string>());
    rules.check();
    return rules;
}

Json to_json(const Layout& layout) {
    Json centers = Json::array();
    for (const auto& row : layout.cell_centers) {
        Json r = Json::array();
        for (const auto& c : row) r.push_back(vec2(c));
        centers.push_back(r);
    }
    Json keys = Json::array();
    for (const auto& k : layout.keypad.key_centers) keys.push_back(vec2(k));
    return {{"cell_centers", centers},
            {"cylinder_radius", layout.cylinder_radius},
            {"z0", layout.z0},
            {"layer_thickness", layout.layer_thickness},
            {"hysteresis_eps", layout.hysteresis_eps},
            {"layer_offset", vec2(layout.layer_offset)},
            {"keypad",
             {{"key_centers", keys},
              {"key_half_width", layout.keypad.key_half_width},
              {"key_half_height", layout.keypad.key_half_height}}}};
}

Layout layout_from_json(const Json& j) {
    Layout layout = Layout::defaults();
    if (j.contains("cell_centers")) {
        const Json& c = j.at("cell_centers");
        for (int row = 0; row < kGridSide; ++row)
            for (int col = 0; col < kGridSide; ++col) layout.cell_centers[row][col] = vec2(c.at(row).at(col));
    }
    read_if(j, "cylinder_radius", layout.cylinder_radius);
    read_if(j, "z0", layout.z0);
    read_if(j, "layer_thickness", layout.layer_thickness);
    read_if(j, "hysteresis_eps", layout.hysteresis_eps);
    if (j.contains("layer_offset")) layout.layer_offset = vec2(j.at("layer_offset"));
    if (j.contains("keypad")) {
        const Json& k = j.at("keypad");
        if (k.contains("key_centers"))
            for (int d = 0; d <= 9; ++d) layout.keypad.key_centers[d] = vec2(k.at("key_centers").at(d));
        read_if(k, "key_half_width", layout.keypad.key_half_width);
        read_if(k, "key_half_height", layout.keypad.key_half_height);
    }
    layout.check();
    return layout;
}

Json to_json(const PhonePose& pose) {
    const auto& p = pose.position;
    const auto& q = pose.orientation;
    return {{"pos", {p.x, p.y, p.z}}, {"orient", {q.w, q.x, q.y, q.z}}};
}

PhonePose pose_from_json(const Json& j) {
    const Json& p = j.at("pos");
    const Json& q = j.at("orient");
    if (!p.is_array() || p.size() != 3) throw std::invalid_argument("pose.pos must have 3 components");
    if (!q.is_array() || q.size() != 4) throw std::invalid_argument("pose.orient must have 4 components");
    return {{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()},
            {q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>()}};
}

Json to_json(const CursorState& cursor) {
    return {{"x", cursor.xy.x},
            {"y", cursor.xy.y},
            {"layer", cursor.layer ? Json(*cursor.layer) : Json(nullptr)},
            {"color", to_string(cursor.color)},
            {"depth_scale", cursor.depth_scale}};
}

CursorState cursor_from_json(const Json& j) {
    CursorState c;
    c.xy = {j.at("x").get<double>(), j.at("y").get<double>()};
    if (!j.at("layer").is_null()) c.layer = j.at("layer").get<int>();
    c.color = parse_cursor_color(j.at("color").get<std::string>());
    c.depth_scale = j.at("depth_scale").get<double>();
    return c;
}

Json to_json(const ValidationError& error) { return {{"kind", to_string(error.kind)}, {"index", error.index}}; }

ValidationError validation_error_from_json(const Json& j) {
    static const ViolationKind kinds[] = {ViolationKind::BadLength, ViolationKind::ReusedPoint,
                                          ViolationKind::BadStartLayer, ViolationKind::SegmentTooLong,
                                          ViolationKind::BypassViolation};
    const auto name = j.at("kind").get<std::string>();
    for (auto k : kinds)
        if (to_string(k) == name) return {k, j.at("index").get<std::size_t>()};
    throw std::invalid_argument("unknown violation kind '" + name + "'");
}

Json to_json(const SessionLog& log) {
    auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
    return {{"technique", to_string(log.technique)},
            {"t_start", log.t_start},
            {"t_first", opt(log.t_first)},
            {"t_submit", opt(log.t_submit)},
            {"outcome", log.outcome ? Json(to_string(*log.outcome)) : Json(nullptr)}};
}

SessionLog session_log_from_json(const Json& j) {
    SessionLog log;
    log.technique = parse_technique(j.at("technique").get<std::string>());
    log.t_start = j.at("t_start").get<double>();
    if (j.contains("t_first") && !j.at("t_first").is_null()) log.t_first = j.at("t_first").get<double>();
    if (j.contains("t_submit") && !j.at("t_submit").is_null()) log.t_submit = j.at("t_submit").get<double>();
    if (j.contains("outcome") && !j.at("outcome").is_null())
        log.outcome = parse_outcome(j.at("outcome").get<std::string>());
    return log;
}

RuleSet EngineSettings::rules_for(Technique technique) const {
    switch (technique) {
        case Technique::Pattern3D: return pattern3d;
        case Technique::Pattern2D: return pattern2d;
        case Technique::Pin: break;
    }
    RuleSet pin;
    pin.required_length = pin_length;
    pin.start_top_layer = false;
    return pin;
}

DecoderConfig EngineSettings::decoder_config(Technique technique) const {
    return {technique, rules_for(technique), layout, dwell_ms, feedback_mode};
}

Json to_json(const EngineSettings& s) {
    return {{"rules", {{"pattern3d", to_json(s.pattern3d)}, {"pattern2d", to_json(s.pattern2d)},
                       {"pin", {{"required_length", s.pin_length}}}}},
            {"layout", to_json(s.layout)},
            {"decoder", {{"dwell_ms", s.dwell_ms}, {"feedback_mode", to_string(s.feedback_mode)}}},
            {"server", {{"bind_host", s.bind_host}, {"port", s.port}, {"debug", s.debug}}},
            {"secrets", s.secrets}};
}

EngineSettings settings_from_json(const Json& j) {
    EngineSettings s;
    if (j.contains("rules")) {
        const Json& r = j.at("rules");
        if (r.contains("pattern3d")) s.pattern3d = rules_from_json(r.at("pattern3d"));
        if (r.contains("pattern2d")) s.pattern2d = rules_from_json(r.at("pattern2d"));
        if (r.contains("pin")) read_if(r.at("pin"), "required_length", s.pin_length);
    }
    if (j.contains("layout")) s.layout = layout_from_json(j.at("layout"));
    if (j.contains("decoder")) {
        const Json& d = j.at("decoder");
        read_if(d, "dwell_ms", s.dwell_ms);
        if (d.contains("feedback_mode")) s.feedback_mode = parse_feedback_mode(d.at("feedback_mode").get<std::string>());
    }
    if (j.contains("server")) {
        const Json& v = j.at("server");
        read_if(v, "bind_host", s.bind_host);
        read_if(v, "port", s.port);
        read_if(v, "debug", s.debug);
    }
    if (j.contains("secrets")) s.secrets = j.at("secrets").get<std::map<std::string, std::vector<int>>>();
    return s;
}

EngineSettings load_settings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    try {
        return settings_from_json(Json::parse(in));
    } catch (const std::exception& e) {
        throw std::runtime_error("config file " + path.string() + ": " + e.what());
    }
}

}  // namespace pretouch
