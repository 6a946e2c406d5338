#include "pretouch/decoder.hpp"

#include <algorithm>
#include <string>

namespace pretouch {

std::string_view to_string(FeedbackMode mode) {
    return mode == FeedbackMode::WithFeedback ? "with_feedback" : "without_feedback";
}

FeedbackMode parse_feedback_mode(std::string_view text) {
    if (text == "with_feedback" || text == "WITH_FEEDBACK") return FeedbackMode::WithFeedback;
    if (text == "without_feedback" || text == "WITHOUT_FEEDBACK") return FeedbackMode::WithoutFeedback;
    throw std::invalid_argument("unknown feedback mode '" + std::string(text) + "'");
}

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::Accepted: return "ACCEPTED";
        case Outcome::RejectedWrongSecret: return "REJECTED_WRONG_SECRET";
        case Outcome::RejectedInvalidPattern: return "REJECTED_INVALID_PATTERN";
    }
    return "?";
}

Outcome parse_outcome(std::string_view text) {
    if (text == "ACCEPTED") return Outcome::Accepted;
    if (text == "REJECTED_WRONG_SECRET") return Outcome::RejectedWrongSecret;
    if (text == "REJECTED_INVALID_PATTERN") return Outcome::RejectedInvalidPattern;
    throw std::invalid_argument("unknown outcome '" + std::string(text) + "'");
}

DecoderConfig DecoderConfig::canonical(Technique technique) {
    DecoderConfig config;
    config.technique = technique;
    config.rules = RuleSet::canonical(technique);
    return config;
}

SessionMetrics session_metrics(const SessionLog& log) {
    if (!log.t_first || !log.t_submit) throw std::invalid_argument("session log is incomplete");
    if (!(log.t_start <= *log.t_first && *log.t_first <= *log.t_submit))
        throw std::invalid_argument("session log timestamps are out of order");
    return {*log.t_submit - log.t_start, *log.t_submit - *log.t_first};
}

DecodeSession::DecodeSession(DecoderConfig config, Code enrolled, double t_start)
    : config_(std::move(config)), enrolled_(std::move(enrolled)), t_start_(t_start) {
    config_.rules.check();
    config_.layout.check();
    if (config_.dwell_ms < 0) throw std::invalid_argument("dwell_ms must be >= 0");
}

FeedOutput DecodeSession::feed(const FingerSample& sample) {
    if (result_) throw DecodeError("session already submitted");
    if (sample.frame != Frame::Local) throw DecodeError("decoder expects LOCAL-frame samples");
    if (last_t_ && sample.t < *last_t_) throw DecodeError("sample timestamps must be non-decreasing");
    last_t_ = sample.t;

    FeedOutput out;
    switch (config_.technique) {
        case Technique::Pattern3D: feed_pattern3d(sample, out); break;
        case Technique::Pattern2D: feed_pattern2d(sample, out); break;
        case Technique::Pin: feed_pin(sample, out); break;
    }
    was_touching_ = sample.touch;
    cursor_trace_.push_back(out.cursor);
    last_cursor_ = out.cursor;

    if (!result_ && static_cast<int>(selected_.size()) >= config_.rules.required_length) finish(sample.t);
    if (!result_ && config_.technique == Technique::Pattern2D && !sample.touch && !selected_.empty())
        finish(sample.t);
    out.submitted = result_.has_value();
    return out;
}

void DecodeSession::feed_pattern3d(const FingerSample& sample, FeedOutput& out) {
    layer_ = quantize_layer(sample.position.z, config_.layout, layer_);
    out.cursor = make_cursor(sample, config_.layout, layer_);
    const auto hit = hit_test(sample, config_.layout, layer_);
    if (hit != candidate_) {
        candidate_ = hit;
        candidate_since_ = sample.t;
    }
    if (!candidate_) return;
    const bool repeat = !selected_.empty() && selected_.back() == digit_index(*candidate_);
    if (!repeat && sample.t - candidate_since_ >= config_.dwell_ms) select(*candidate_, sample.t, out);
}

void DecodeSession::feed_pattern2d(const FingerSample& sample, FeedOutput& out) {
    const LayerIndex layer = sample.touch ? LayerIndex{kPattern2DLayer} : std::nullopt;
    out.cursor = make_cursor(sample, config_.layout, layer);
    if (!sample.touch) return;
    const auto hit = hit_test(sample, config_.layout, layer);
    if (hit && (selected_.empty() || selected_.back() != digit_index(*hit))) select(*hit, sample.t, out);
}

void DecodeSession::feed_pin(const FingerSample& sample, FeedOutput& out) {
    out.cursor = make_cursor(sample, config_.layout, std::nullopt);
    if (!sample.touch || was_touching_) return;
    if (const auto digit = keypad_hit({sample.position.x, sample.position.y}, config_.layout))
        select_digit(*digit, sample.t, out);
}

void DecodeSession::select(const GridPoint& point, double t, FeedOutput& out) {
    if (config_.rules.bypass_policy == BypassPolicy::AutoInclude && !selected_.empty()) {
        const GridPoint last = point_from_digit(selected_.back());
        if (last.layer == point.layer || config_.rules.bypass_scope == BypassScope::AllAxes) {
            for (const auto& q : segment_interior_points(last, point)) {
                const int d = digit_index(q);
                if (std::find(selected_.begin(), selected_.end(), d) == selected_.end()) select_digit(d, t, out);
            }
        }
    }
    select_digit(digit_index(point), t, out);
}

void DecodeSession::select_digit(int digit, double t, FeedOutput& out) {
    const SelectionEvent event{t, digit, true};
    selected_.push_back(digit);
    events_.push_back(event);
    out.selections.push_back(event);
}

void DecodeSession::finish(double t) {
    DecodeResult result;
    result.entered = {config_.technique, selected_};
    if (config_.technique == Technique::Pin) {
        if (!validate_pin(selected_, config_.rules.required_length))
            result.violations.push_back({ViolationKind::BadLength, selected_.size()});
    } else {
        result.violations = validate_pattern(to_pattern(result.entered), config_.rules).errors;
    }
    if (!result.violations.empty())
        result.outcome = Outcome::RejectedInvalidPattern;
    else
        result.outcome = result.entered == enrolled_ ? Outcome::Accepted : Outcome::RejectedWrongSecret;
    result.events = events_;
    result.cursor_trace = cursor_trace_;
    result.log = {config_.technique, t_start_, events_.front().t, t, result.outcome};
    result_ = std::move(result);
}

const DecodeResult& DecodeSession::submit() {
    if (result_) throw DecodeError("session already submitted");
    if (selected_.empty()) throw DecodeError("cannot submit before any selection");
    finish(last_t_.value_or(t_start_));
    return *result_;
}

FeedbackLines DecodeSession::feedback_lines() const {
    FeedbackLines lines;
    if (config_.feedback_mode == FeedbackMode::WithoutFeedback || config_.technique == Technique::Pin) return lines;
    for (std::size_t i = 0; i + 1 < selected_.size(); ++i) lines.emplace_back(selected_[i], selected_[i + 1]);
    return lines;
}

DecodeResult decode_stream(std::span<const FingerSample> samples, const DecoderConfig& config,
                           const Code& enrolled, double t_start) {
    if (samples.empty()) throw DecodeError("empty sample stream");
    DecodeSession session(config, enrolled, t_start);
    for (const auto& s : samples) {
        if (session.feed(s).submitted) break;
    }
    if (!session.submitted()) session.submit();
    return *session.result();
}

}  // namespace pretouch
