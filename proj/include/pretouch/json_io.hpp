#ifndef PRETOUCH_JSON_IO_HPP
#define PRETOUCH_JSON_IO_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "pretouch/decoder.hpp"
#include "pretouch/geometry.hpp"
#include "pretouch/rules.hpp"

namespace pretouch {

using Json = nlohmann::json;

Json to_json(const RuleSet& rules);
RuleSet rules_from_json(const Json& j);

Json to_json(const Layout& layout);
Layout layout_from_json(const Json& j);

Json to_json(const PhonePose& pose);
PhonePose pose_from_json(const Json& j);

Json to_json(const CursorState& cursor);
CursorState cursor_from_json(const Json& j);

Json to_json(const ValidationError& error);
ValidationError validation_error_from_json(const Json& j);

Json to_json(const SessionLog& log);
SessionLog session_log_from_json(const Json& j);

/// Repository configuration: per-technique rules, layout, decoder and
/// server settings. Missing keys keep their defaults.
struct EngineSettings {
    RuleSet pattern3d = RuleSet::canonical(Technique::Pattern3D);
    RuleSet pattern2d = RuleSet::canonical(Technique::Pattern2D);
    int pin_length = 4;
    Layout layout = Layout::defaults();
    double dwell_ms = 50.0;
    FeedbackMode feedback_mode = FeedbackMode::WithoutFeedback;
    std::string bind_host = "127.0.0.1";
    int port = 7420;
    bool debug = false;
    /// Secrets enrolled per technique name, used when a session start does
    /// not carry its own.
    std::map<std::string, std::vector<int>> secrets;

    RuleSet rules_for(Technique technique) const;
    DecoderConfig decoder_config(Technique technique) const;
};

Json to_json(const EngineSettings& settings);
EngineSettings settings_from_json(const Json& j);
/// Throws std::runtime_error when the file is missing or malformed.
EngineSettings load_settings(const std::filesystem::path& path);

}  // namespace pretouch

#endif  // PRETOUCH_JSON_IO_HPP
