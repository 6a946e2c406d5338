#include "pretouch/replay.hpp"

#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

#include "pretouch/socket.hpp"

namespace pretouch::net {

std::optional<DecodeResult> ReplayRecord::decode_result(Technique technique) const {
    if (!result || !result->entered || !result->events || !result->violations || !result->log) return std::nullopt;
    DecodeResult out;
    out.entered = {technique, *result->entered};
    out.outcome = result->outcome;
    out.violations = *result->violations;
    out.events = *result->events;
    for (const auto& r : renders) out.cursor_trace.push_back(r.cursor);
    out.log = *result->log;
    return out;
}

namespace {

// Collects decoded engine messages on a background thread so the sender
// never blocks on a full receive window.
class Inbox {
public:
    explicit Inbox(const Socket& socket) : reader_thread_([this, &socket] { run(socket); }) {}
    ~Inbox() {
        if (reader_thread_.joinable()) reader_thread_.join();
    }

    std::optional<wire::Envelope> pop(std::chrono::milliseconds timeout) {
        std::unique_lock lock(mutex_);
        if (!cv_.wait_for(lock, timeout, [this] { return !queue_.empty() || closed_; })) return std::nullopt;
        if (queue_.empty()) return std::nullopt;
        auto env = std::move(queue_.front());
        queue_.pop_front();
        return env;
    }

    bool closed() {
        std::lock_guard lock(mutex_);
        return closed_ && queue_.empty();
    }

private:
    void run(const Socket& socket) {
        LineReader reader(socket);
        try {
            while (auto line = reader.next_line()) {
                if (line->empty()) continue;
                auto env = wire::decode(*line);
                std::lock_guard lock(mutex_);
                queue_.push_back(std::move(env));
                cv_.notify_all();
            }
        } catch (const std::exception&) {
        }
        std::lock_guard lock(mutex_);
        closed_ = true;
        cv_.notify_all();
    }

    std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<wire::Envelope> queue_;
    bool closed_ = false;
    std::thread reader_thread_;
};

Socket connect_with_retries(const ReplayOptions& options) {
    for (int attempt = 0;; ++attempt) {
        try {
            return connect_tcp(options.host, options.port);
        } catch (const SocketError& e) {
            if (attempt >= options.max_retries)
                throw ReplayError(std::string(e.what()) + " (after " + std::to_string(attempt) + " retries)", attempt);
            std::this_thread::sleep_for(options.retry_delay);
        }
    }
}

}  // namespace

std::vector<ReplayRecord> replay_corpus(const Corpus& corpus, const ReplayOptions& options) {
    std::vector<ReplayRecord> records;
    if (corpus.streams.empty()) return records;

    Socket socket = connect_with_retries(options);
    Inbox inbox(socket);
    std::uint64_t seq = 0;
    auto send = [&](const wire::Message& m) {
        const std::uint64_t s = ++seq;
        try {
            socket.send_all(wire::encode({s, m}) + "\n");
        } catch (const SocketError& e) {
            throw ReplayError(std::string("connection dropped: ") + e.what(), 0);
        }
        return s;
    };

    try {
        for (const auto& stream : corpus.streams) {
            ReplayRecord record;
            record.stream_id = stream.id;

            wire::Control start;
            start.action = wire::ControlAction::Start;
            start.technique = stream.technique;
            start.feedback_mode = options.feedback_mode;
            start.secret = stream.target;
            start.session = stream.id;
            send(start);

            const PhonePose pose = stream.pose.value_or(PhonePose{});
            const auto t0 = std::chrono::steady_clock::now();
            const double first_t = stream.samples.empty() ? 0.0 : stream.samples.front().t;
            for (const auto& s : stream.samples) {
                if (options.realtime) {
                    const auto due = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                              std::chrono::duration<double, std::milli>(s.t - first_t));
                    std::this_thread::sleep_until(due);
                }
                // LOCAL samples go out as world samples under the identity pose.
                send(wire::Sample{s.t, s.position, pose, s.touch, stream.id});
            }
            wire::Control submit = start;
            submit.action = wire::ControlAction::Submit;
            submit.secret.reset();
            const std::uint64_t submit_seq = send(submit);

            while (true) {
                auto env = inbox.pop(options.result_timeout);
                if (!env) {
                    if (inbox.closed()) throw ReplayError("connection dropped while waiting for RESULT", 0);
                    record.errors.push_back({"timeout", "no RESULT within the timeout", std::nullopt});
                    break;
                }
                if (auto* r = std::get_if<wire::Render>(&env->message)) {
                    record.renders.push_back(*r);
                } else if (auto* res = std::get_if<wire::Result>(&env->message)) {
                    record.result = *res;
                    break;
                } else if (auto* err = std::get_if<wire::Error>(&env->message)) {
                    record.errors.push_back(*err);
                    if (err->ref_seq == submit_seq) break;
                }
            }

            wire::Control cancel = start;
            cancel.action = wire::ControlAction::Cancel;
            cancel.secret.reset();
            send(cancel);
            records.push_back(std::move(record));
        }
    } catch (...) {
        socket.shutdown();
        throw;
    }
    socket.shutdown();
    return records;
}

}  // namespace pretouch::net
