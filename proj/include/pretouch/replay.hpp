#ifndef PRETOUCH_REPLAY_HPP
#define PRETOUCH_REPLAY_HPP

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pretouch/corpus.hpp"
#include "pretouch/decoder.hpp"
#include "pretouch/wire.hpp"

namespace pretouch::net {

struct ReplayOptions {
    std::string host = "127.0.0.1";
    int port = 7420;
    /// Pace SAMPLEs by their timestamps instead of sending as fast as possible.
    bool realtime = false;
    int max_retries = 5;
    std::chrono::milliseconds retry_delay{100};
    std::chrono::milliseconds result_timeout{10000};
    FeedbackMode feedback_mode = FeedbackMode::WithoutFeedback;
};

struct ReplayRecord {
    std::string stream_id;
    std::vector<wire::Render> renders;
    std::optional<wire::Result> result;
    std::vector<wire::Error> errors;

    /// Rebuilds the engine's DecodeResult; needs a debug-mode engine.
    std::optional<DecodeResult> decode_result(Technique technique) const;
};

class ReplayError : public std::runtime_error {
public:
    ReplayError(const std::string& what, int retries) : std::runtime_error(what), retries_(retries) {}
    int retries() const { return retries_; }

private:
    int retries_;
};

/// Acts as the tracker: for every stream, starts a session named after the
/// stream (enrolling the stream's target), sends its samples as world-frame
/// SAMPLEs (LOCAL streams go out with the identity pose), asks for
/// submission and collects the engine's output.
std::vector<ReplayRecord> replay_corpus(const Corpus& corpus, const ReplayOptions& options);

}  // namespace pretouch::net

#endif  // PRETOUCH_REPLAY_HPP
