// Acceptance suite: one PASS/FAIL line per primary criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include "oracles.hpp"
#include "pretouch/attacks.hpp"
#include "pretouch/corpus.hpp"
#include "pretouch/decoder.hpp"
#include "pretouch/replay.hpp"
#include "pretouch/server.hpp"
#include "pretouch/simulation.hpp"
#include "pretouch/space.hpp"

using namespace pretouch;
using Clock = std::chrono::steady_clock;

namespace {

const Layout kLayout = Layout::defaults();
const RuleSet k3D = RuleSet::canonical(Technique::Pattern3D);
const RuleSet k2D = RuleSet::canonical(Technique::Pattern2D);

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
    std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<FingerSample> synth(const Code& code, double sigma = 0, std::uint64_t seed = 0) {
    TrajectorySpec spec;
    spec.target = code;
    return synthesize(spec, {sigma, 0, seed}, kLayout);
}

std::set<std::vector<int>> digit_set(const std::vector<Pattern>& ps) {
    std::set<std::vector<int>> out;
    for (const auto& p : ps) out.insert(to_code(p).digits);
    return out;
}

void password_space_counts() {
    const auto t0 = Clock::now();
    const auto c3 = count_patterns(k3D, Technique::Pattern3D);
    const auto c2 = count_patterns(k2D, Technique::Pattern2D);
    const auto pin = pin_space_size(4);
    const auto bound = theoretical_upper_bound();
    const auto naive3 = enumerate_patterns_naive(k3D, Technique::Pattern3D).size();
    const auto naive2 = enumerate_patterns_naive(k2D, Technique::Pattern2D).size();
    const double secs = seconds_since(t0);
    const bool ok = c3 == 19192 && c2 == 1400 && pin == 10000 && bound == 387504 && naive3 == c3 && naive2 == c2 &&
                    secs < 5.0;
    report("password-space counts", ok,
           fmt("3D=%llu 2D=%llu PIN=%llu bound=%llu (naive 3D=%zu 2D=%zu) in %.2fs", (unsigned long long)c3,
               (unsigned long long)c2, (unsigned long long)pin, (unsigned long long)bound, naive3, naive2, secs));
}

void oracle_equivalence() {
    std::size_t checked = 0, mismatched = 0;
    for (const auto& config : rule_lattice())
        for (int length = 1; length <= 4; ++length)
            for (Technique t : {Technique::Pattern2D, Technique::Pattern3D}) {
                const RuleSet rules = t == Technique::Pattern3D ? config.rules_3d(length) : config.rules_2d(length);
                ++checked;
                mismatched += digit_set(enumerate_patterns(rules, t)) != digit_set(enumerate_patterns_naive(rules, t));
            }
    report("oracle equivalence", mismatched == 0 && checked == 36 * 4 * 2,
           fmt("%zu configuration/length/technique sets, %zu mismatches", checked, mismatched));
}

// Also feeds the smudge criterion with the traces it produced.
void round_trip_and_smudge() {
    const auto space = enumerate_patterns(k3D, Technique::Pattern3D);
    const auto config = DecoderConfig::canonical(Technique::Pattern3D);
    const auto t0 = Clock::now();
    std::size_t ok = 0, touched = 0, not_full = 0;
    for (const auto& p : space) {
        const Code code = to_code(p);
        const auto samples = synth(code);
        const auto r = decode_stream(samples, config, code);
        ok += r.entered == code && r.outcome == Outcome::Accepted;
        const auto log = touch_log(samples);
        touched += !log.contacts.empty();
        const auto c = smudge_candidates(log, Technique::Pattern3D, k3D, kLayout);
        not_full += !(c.full_space && c.count == 19192);
    }
    const double secs = seconds_since(t0);
    report("decoder round trip", ok == space.size() && space.size() == 19192 && secs < 60.0,
           fmt("%zu/%zu decoded to the source pattern in %.1fs", ok, space.size(), secs));

    // 2D: every full drag trace
    std::size_t over_two = 0, missing_truth = 0, n2 = 0;
    for (const auto& p : enumerate_patterns(k2D, Technique::Pattern2D)) {
        const Code code = to_code(p);
        const auto c = smudge_candidates(touch_log(synth(code)), Technique::Pattern2D, k2D, kLayout);
        over_two += c.count > 2;
        missing_truth += std::find(c.codes.begin(), c.codes.end(), code) == c.codes.end();
        ++n2;
    }
    // PIN: every code against a brute-force support filter
    std::map<int, std::uint64_t> by_support;
    auto mask_of = [](int code) {
        int m = 0;
        for (int k = 0; k < 4; ++k, code /= 10) m |= 1 << (code % 10);
        return m;
    };
    for (int code = 0; code < 10000; ++code) ++by_support[mask_of(code)];
    const RuleSet pin_rules = RuleSet::canonical(Technique::Pin);
    std::size_t pin_mismatch = 0;
    for (int code = 0; code < 10000; ++code) {
        const std::vector<int> digits{code / 1000, code / 100 % 10, code / 10 % 10, code % 10};
        const auto c = smudge_candidates(touch_log(synth({Technique::Pin, digits})), Technique::Pin, pin_rules, kLayout);
        pin_mismatch += c.count != by_support[mask_of(code)];
    }
    report("smudge immunity", touched == 0 && not_full == 0 && over_two == 0 && missing_truth == 0 && pin_mismatch == 0,
           fmt("3D: %zu non-empty logs, %zu partial sets of %zu; 2D: %zu traces over 2 candidates of %zu; "
               "PIN: %zu support mismatches of 10000",
               touched, not_full, space.size(), over_two, n2, pin_mismatch));
}

void noise_robustness() {
    const auto space = enumerate_patterns(k3D, Technique::Pattern3D);
    const auto config = DecoderConfig::canonical(Technique::Pattern3D);
    const int trials = 500;
    auto success_rate = [&](double sigma) {
        int ok = 0;
        for (int i = 0; i < trials; ++i) {
            const Code code = to_code(space[derive_seed(2024, i) % space.size()]);
            try {
                ok += decode_stream(synth(code, sigma, derive_seed(7, i)), config, code).outcome == Outcome::Accepted;
            } catch (const DecodeError&) {
            }
        }
        return static_cast<double>(ok) / trials;
    };
    const double target_sigma = kLayout.layer_thickness / 10;
    std::string curve;
    bool monotone = true;
    double prev = 2.0, at_target = 0.0, at_zero = 0.0;
    for (double sigma : {0.0, 1.0, 2.0, target_sigma, 4.0, 5.0}) {
        const double rate = success_rate(sigma);
        monotone = monotone && rate <= prev;
        prev = rate;
        if (sigma == target_sigma) at_target = rate;
        if (sigma == 0.0) at_zero = rate;
        curve += fmt(" s=%.0f:%.1f%%", sigma, 100 * rate);
    }
    report("noise robustness", at_target >= 0.95 && at_zero == 1.0 && monotone,
           fmt("sigma=%.1fmm success %.1f%% (>=95%%); curve%s", target_sigma, 100 * at_target, curve.c_str()));
}

void shoulder_surfing() {
    const ShoulderSurfer s3(Technique::Pattern3D, k3D);
    const ShoulderSurfer s2(Technique::Pattern2D, k2D);
    std::size_t not_first = 0;
    for (std::size_t i = 0; i < s3.space().size(); ++i) {
        const Pattern& p = s3.space()[i];
        const auto r = s3.rank(observe(p, DepthConfusion::identity(), i), DepthConfusion::identity(), to_code(p));
        not_first += r.rank_of_truth != 1u;
    }
    const std::size_t trials = 20;
    auto mean_guesses = [&](const ShoulderSurfer& s, const DepthConfusion& c) {
        double total = 0;
        for (std::size_t i = 0; i < s.space().size(); ++i) total += s.expected_guesses(s.space()[i], c, trials, derive_seed(99, i));
        return total / static_cast<double>(s.space().size());
    };
    const double uniform3 = mean_guesses(s3, DepthConfusion::uniform());
    const double uniform2 = mean_guesses(s2, DepthConfusion::uniform());
    std::string curve;
    bool monotone = true;
    double prev = 0;
    for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double e = mean_guesses(s3, DepthConfusion::blend(lambda));
        monotone = monotone && e >= prev;
        prev = e;
        curve += fmt(" %.2f:%.3f", lambda, e);
    }
    report("shoulder-surfing model", not_first == 0 && uniform3 >= uniform2 && monotone,
           fmt("identity rank>1: %zu/%zu; uniform mean 3D=%.3f vs 2D=%.3f; blend%s", not_first, s3.space().size(),
               uniform3, uniform2, curve.c_str()));
}

void transform_correctness() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> pos(-2000, 2000), unit(-1, 1), ang(-M_PI, M_PI);
    double worst = 0;
    std::size_t identity_mismatch = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const PhonePose pose{{pos(rng), pos(rng), pos(rng)},
                             Quaternion::from_axis_angle({unit(rng), unit(rng), unit(rng)}, ang(rng))};
        const FingerSample a{0, {pos(rng), pos(rng), pos(rng)}, Frame::World, false};
        const FingerSample b{1, {pos(rng), pos(rng), pos(rng)}, Frame::World, false};
        const double d = norm(a.position - b.position);
        const double dl = norm(to_local(a, pose).position - to_local(b, pose).position);
        worst = std::max(worst, std::abs(d - dl));
        identity_mismatch += !(to_local(a, PhonePose{}).position == a.position);
    }
    report("transform correctness", worst <= 1e-9 && identity_mismatch == 0,
           fmt("max distance error %.3g mm over %d pairs (<=1e-9); identity mismatches %zu", worst, n, identity_mismatch));
}

double pos_of(std::size_t i) { return 37.0 * static_cast<double>(i % 11); }

// Mixed techniques and noise levels; every fourth stream carries a wrong
// secret and every third arrives in the world frame.
Corpus equivalence_corpus(std::size_t n3d, std::size_t extra) {
    Corpus corpus{layout_checksum(kLayout), {}};
    const auto space = enumerate_patterns(k3D, Technique::Pattern3D);
    const auto space2 = enumerate_patterns(k2D, Technique::Pattern2D);
    std::mt19937_64 rng(5);
    for (std::size_t i = 0; i < n3d + extra; ++i) {
        CorpusStream s;
        s.id = "eq" + std::to_string(i);
        Code code;
        double sigma = 0;
        if (i < n3d) {
            code = to_code(space[rng() % space.size()]);
            sigma = 3.0 * (i % 3);
        } else if (i % 2) {
            code = to_code(space2[rng() % space2.size()]);
            sigma = 0.5;
        } else {
            code = {Technique::Pin, {int(rng() % 10), int(rng() % 10), int(rng() % 10), int(rng() % 10)}};
            sigma = 0.5;
        }
        s.technique = code.technique;
        s.samples = synth(code, sigma, i);
        s.target = code.digits;
        if (i % 4 == 1) {
            if (code.technique == Technique::Pin) s.target->back() = (s.target->back() + 1) % 10;
            else if (code.technique == Technique::Pattern3D) s.target = to_code(space[rng() % space.size()]).digits;
            else s.target = to_code(space2[rng() % space2.size()]).digits;
        }
        if (i % 3 == 2) {
            s.frame = Frame::World;
            s.pose = PhonePose{{pos_of(i), -pos_of(i + 1), 800}, Quaternion::from_axis_angle({1, -2, 0.5}, 0.1 * i)};
            for (auto& x : s.samples) x = to_world(x, *s.pose);
        }
        corpus.streams.push_back(std::move(s));
    }
    return corpus;
}

void online_offline() {
    EngineSettings settings;
    settings.debug = true;
    net::EngineServer server(settings);
    const int port = server.bind("127.0.0.1", 0);
    server.start();

    auto compare = [&](const Corpus& corpus, bool realtime, std::size_t& mismatches) {
        net::ReplayOptions options;
        options.port = port;
        options.realtime = realtime;
        const auto records = net::replay_corpus(corpus, options);
        if (records.size() != corpus.streams.size()) {
            mismatches += corpus.streams.size();
            return;
        }
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& s = corpus.streams[i];
            std::optional<DecodeResult> offline;
            try {
                offline = decode_stream(local_samples(s), DecoderConfig::canonical(s.technique), {s.technique, *s.target});
            } catch (const DecodeError&) {
            }
            const auto online = records[i].decode_result(s.technique);
            mismatches += !(online == offline);
        }
    };
    const auto t0 = Clock::now();
    std::size_t fast_mismatch = 0, realtime_mismatch = 0;
    const Corpus big = equivalence_corpus(240, 60);
    compare(big, false, fast_mismatch);
    const double fast_secs = seconds_since(t0);
    const Corpus small = equivalence_corpus(4, 2);
    const auto t1 = Clock::now();
    compare(small, true, realtime_mismatch);
    const double real_secs = seconds_since(t1);
    server.stop();
    report("online/offline equivalence", fast_mismatch == 0 && realtime_mismatch == 0,
           fmt("fast: %zu/%zu mismatches (%.1fs); realtime: %zu/%zu mismatches (%.1fs)", fast_mismatch,
               big.streams.size(), fast_secs, realtime_mismatch, small.streams.size(), real_secs));
}

void metrics_definitions() {
    const auto worked = session_metrics({Technique::Pin, 0, 3300, 8000, Outcome::Accepted});
    bool ok = worked == SessionMetrics{8000, 4700};
    ok = ok && session_metrics({Technique::Pattern3D, 500, 500, 500, Outcome::Accepted}) == SessionMetrics{0, 0};
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1e5);
    for (int i = 0; i < 10000 && ok; ++i) {
        double a = u(rng), b = u(rng), c = u(rng);
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        const auto m = session_metrics({Technique::Pattern2D, a, b, c, Outcome::Accepted});
        ok = m.entry_time_ms == c - a && m.time_from_first_ms == c - b;
    }
    bool rejects = false;
    try {
        session_metrics({Technique::Pin, 0, std::nullopt, 10, std::nullopt});
    } catch (const std::invalid_argument&) {
        rejects = true;
    }
    // decoded logs: first selection and submission line up with the events
    const Code code{Technique::Pattern3D, {18, 10, 2, 11}};
    const auto r = decode_stream(synth(code), DecoderConfig::canonical(Technique::Pattern3D), code);
    const auto m = session_metrics(r.log);
    ok = ok && rejects && m.entry_time_ms == *r.log.t_submit && m.time_from_first_ms == r.events.back().t - r.events.front().t;
    report("metrics definitions", ok, fmt("(0,3300,8000) -> (%.0f, %.0f) ms; decoded 3D entry %.0f ms, from first %.0f ms",
                                          worked.entry_time_ms, worked.time_from_first_ms, m.entry_time_ms, m.time_from_first_ms));
}

}  // namespace

int main() {
    password_space_counts();
    oracle_equivalence();
    round_trip_and_smudge();
    noise_robustness();
    shoulder_surfing();
    transform_correctness();
    online_offline();
    metrics_definitions();
    std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
