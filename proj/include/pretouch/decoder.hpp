#ifndef PRETOUCH_DECODER_HPP
#define PRETOUCH_DECODER_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "pretouch/geometry.hpp"
#include "pretouch/grid.hpp"
#include "pretouch/rules.hpp"

namespace pretouch {

enum class FeedbackMode { WithFeedback, WithoutFeedback };

std::string_view to_string(FeedbackMode mode);
FeedbackMode parse_feedback_mode(std::string_view text);

struct DecoderConfig {
    Technique technique = Technique::Pattern3D;
    RuleSet rules = RuleSet::canonical(Technique::Pattern3D);
    Layout layout = Layout::defaults();
    double dwell_ms = 50.0;
    FeedbackMode feedback_mode = FeedbackMode::WithoutFeedback;

    static DecoderConfig canonical(Technique technique);
};

struct SelectionEvent {
    double t = 0.0;
    int digit = 0;  ///< lattice digit index, or the PIN digit
    bool haptic = true;

    bool operator==(const SelectionEvent&) const = default;
};

enum class Outcome { Accepted, RejectedWrongSecret, RejectedInvalidPattern };

std::string_view to_string(Outcome outcome);
Outcome parse_outcome(std::string_view text);

struct SessionLog {
    Technique technique = Technique::Pattern3D;
    double t_start = 0.0;
    std::optional<double> t_first;
    std::optional<double> t_submit;
    std::optional<Outcome> outcome;

    bool operator==(const SessionLog&) const = default;
};

struct SessionMetrics {
    double entry_time_ms = 0.0;
    double time_from_first_ms = 0.0;

    bool operator==(const SessionMetrics&) const = default;
};

/// entry_time = t_submit - t_start, time_from_first = t_submit - t_first.
/// Throws std::invalid_argument when the log is incomplete or unordered.
SessionMetrics session_metrics(const SessionLog& log);

struct DecodeResult {
    Code entered;
    Outcome outcome = Outcome::RejectedInvalidPattern;
    std::vector<ValidationError> violations;
    std::vector<SelectionEvent> events;
    std::vector<CursorState> cursor_trace;
    SessionLog log;

    bool operator==(const DecodeResult&) const = default;
};

/// Pairs of digits joined by a rendered line.
using FeedbackLines = std::vector<std::pair<int, int>>;

struct FeedOutput {
    std::vector<SelectionEvent> selections;  ///< usually zero or one
    CursorState cursor;
    bool submitted = false;
};

/// Thrown for stream contract violations (ordering, frame, lifecycle).
class DecodeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Streaming decoder for one entry attempt. Single-threaded; move it
/// between threads freely but never share it.
class DecodeSession {
public:
    DecodeSession(DecoderConfig config, Code enrolled, double t_start = 0.0);

    /// Consumes one local-frame sample. Auto-submits once required_length
    /// points are selected (and, for 2D patterns, on lift-off).
    FeedOutput feed(const FingerSample& sample);

    /// Explicit submission. Throws DecodeError before the first selection
    /// or after the session has already been submitted.
    const DecodeResult& submit();

    bool submitted() const { return result_.has_value(); }
    const std::optional<DecodeResult>& result() const { return result_; }

    std::size_t selected_count() const { return selected_.size(); }
    const std::vector<int>& selected() const { return selected_; }
    const std::vector<SelectionEvent>& events() const { return events_; }
    /// Empty in WITHOUT_FEEDBACK mode and for PINs.
    FeedbackLines feedback_lines() const;
    const DecoderConfig& config() const { return config_; }
    const std::optional<CursorState>& last_cursor() const { return last_cursor_; }

private:
    void feed_pattern3d(const FingerSample& sample, FeedOutput& out);
    void feed_pattern2d(const FingerSample& sample, FeedOutput& out);
    void feed_pin(const FingerSample& sample, FeedOutput& out);
    void select(const GridPoint& point, double t, FeedOutput& out);
    void select_digit(int digit, double t, FeedOutput& out);
    void finish(double t);

    DecoderConfig config_;
    Code enrolled_;
    double t_start_;
    std::optional<double> last_t_;
    LayerIndex layer_;
    std::optional<GridPoint> candidate_;
    double candidate_since_ = 0.0;
    bool was_touching_ = false;
    std::vector<int> selected_;
    std::vector<SelectionEvent> events_;
    std::vector<CursorState> cursor_trace_;
    std::optional<CursorState> last_cursor_;
    std::optional<DecodeResult> result_;
};

/// Feeds the stream sample by sample and submits at the end if the session
/// did not auto-submit. Samples after an auto-submission are ignored.
/// Throws DecodeError for an empty stream or a stream without selections.
DecodeResult decode_stream(std::span<const FingerSample> samples, const DecoderConfig& config,
                           const Code& enrolled, double t_start = 0.0);

}  // namespace pretouch

#endif  // PRETOUCH_DECODER_HPP
