// pretouch: command-line front end for the pattern-lock engine toolkit.

#include <algorithm>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pretouch/attacks.hpp"
#include "pretouch/corpus.hpp"
#include "pretouch/decoder.hpp"
#include "pretouch/json_io.hpp"
#include "pretouch/replay.hpp"
#include "pretouch/server.hpp"
#include "pretouch/simulation.hpp"
#include "pretouch/socket.hpp"
#include "pretouch/space.hpp"

using namespace pretouch;

namespace {

constexpr const char* kDefaultConfig = "config/canonical.json";

struct Common {
    std::string config_path;
    std::string format = "table";

    EngineSettings settings() const {
        if (!config_path.empty()) return load_settings(config_path);
        if (std::filesystem::exists(kDefaultConfig)) return load_settings(kDefaultConfig);
        return {};
    }
    bool records() const { return format == "records"; }
};

void add_common(CLI::App* app, Common& common) {
    app->add_option("--config", common.config_path, "configuration file (default: config/canonical.json if present)");
    app->add_option("--format", common.format, "output format")->check(CLI::IsMember({"table", "records"}));
}

Technique technique_arg(const std::string& text) { return parse_technique(text); }

// ---------------------------------------------------------------- enumerate

struct EnumerateArgs {
    std::string technique = "pattern3d";
    int length = 0;
    bool list = false;
    bool naive = false;
};

int run_enumerate(const Common& common, const EnumerateArgs& a) {
    const Technique t = technique_arg(a.technique);
    const EngineSettings s = common.settings();
    RuleSet rules = s.rules_for(t);
    if (a.length > 0) rules.required_length = a.length;
    if (t == Technique::Pin) {
        std::cout << pin_space_size(rules.required_length) << "\n";
        return 0;
    }
    if (a.list) {
        const auto patterns = a.naive ? enumerate_patterns_naive(rules, t) : enumerate_patterns(rules, t);
        for (const auto& p : patterns) std::cout << Json(to_code(p).digits).dump() << "\n";
        return 0;
    }
    const std::uint64_t count = a.naive ? enumerate_patterns_naive(rules, t).size() : count_patterns(rules, t);
    if (common.records())
        std::cout << Json{{"technique", to_string(t)}, {"length", rules.required_length}, {"count", count}}.dump() << "\n";
    else
        std::cout << count << "\n";
    return 0;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
    std::string technique = "pattern3d";
    std::string pattern;
};

int run_validate(const Common& common, const ValidateArgs& a) {
    const Technique t = technique_arg(a.technique);
    const EngineSettings s = common.settings();
    const RuleSet rules = s.rules_for(t);
    const auto digits = parse_digit_list(a.pattern);
    if (t == Technique::Pin) {
        const bool ok = validate_pin(digits, rules.required_length);
        std::cout << (ok ? "ok" : "invalid PIN") << "\n";
        return ok ? 0 : 1;
    }
    const auto result = validate_pattern(to_pattern({t, digits}), rules);
    if (common.records()) {
        Json errors = Json::array();
        for (const auto& e : result.errors) errors.push_back(to_json(e));
        std::cout << Json{{"pattern", digits}, {"ok", result.ok()}, {"errors", errors}}.dump() << "\n";
    } else if (result.ok()) {
        std::cout << "ok\n";
    } else {
        for (const auto& e : result.errors) {
            const bool segment = e.kind == ViolationKind::SegmentTooLong || e.kind == ViolationKind::BypassViolation;
            std::cout << to_string(e.kind) << (e.kind == ViolationKind::BadLength ? " length " : segment ? " segment " : " point ")
                      << e.index << "\n";
        }
    }
    return result.ok() ? 0 : 1;
}

// ---------------------------------------------------------------- strength

struct StrengthArgs {
    int length = 0;
};

int run_strength(const Common& common, const StrengthArgs& a) {
    const EngineSettings s = common.settings();
    std::vector<std::pair<std::string, std::uint64_t>> rows;
    for (Technique t : {Technique::Pin, Technique::Pattern2D, Technique::Pattern3D}) {
        RuleSet rules = s.rules_for(t);
        if (a.length > 0) rules.required_length = a.length;
        rows.emplace_back(std::string(to_string(t)), t == Technique::Pin ? pin_space_size(rules.required_length)
                                                                        : count_patterns(rules, t));
    }
    if (a.length == 0 || a.length == 4) rows.emplace_back("upper_bound_3d", theoretical_upper_bound());
    for (const auto& [name, count] : rows) {
        if (common.records())
            std::cout << Json{{"technique", name}, {"count", count}, {"bits", strength_bits(count)}}.dump() << "\n";
        else
            std::cout << std::left << std::setw(16) << name << std::right << std::setw(10) << count << std::setw(10)
                      << std::fixed << std::setprecision(3) << strength_bits(count) << " bits\n";
    }
    return 0;
}

// ---------------------------------------------------------------- rulesearch

struct RuleSearchArgs {
    std::optional<std::uint64_t> target_2d;
    std::optional<std::uint64_t> target_3d;
    int length = 4;
    std::string write_config;
};

Json entry_json(const RuleSearchEntry& e) {
    return {{"bypass_policy", to_string(e.config.bypass_policy)},
            {"bypass_scope", to_string(e.config.bypass_scope)},
            {"start_top_2d", e.config.start_top_2d},
            {"max_cross_layer_sq_dist", e.config.max_cross_layer_sq_dist},
            {"count_2d", e.count_2d},
            {"count_3d", e.count_3d},
            {"deviation", e.deviation}};
}

int run_rulesearch(const Common& common, const RuleSearchArgs& a) {
    const auto report = rule_search(a.target_2d, a.target_3d, a.length);
    const auto& shown = report.matches.empty() ? report.nearest : report.matches;
    if (common.records()) {
        for (const auto& e : shown) {
            Json j = entry_json(e);
            j["match"] = e.deviation == 0;
            std::cout << j.dump() << "\n";
        }
    } else {
        std::cout << (report.matches.empty() ? "no exact match; nearest configurations:\n" : "matching configurations:\n");
        for (const auto& e : shown)
            std::cout << "  " << std::left << std::setw(17) << to_string(e.config.bypass_policy) << std::setw(18)
                      << to_string(e.config.bypass_scope) << "start_top_2d=" << e.config.start_top_2d
                      << " cap=" << e.config.max_cross_layer_sq_dist << "  2d=" << e.count_2d << " 3d=" << e.count_3d
                      << " deviation=" << e.deviation << "\n";
    }
    if (!a.write_config.empty()) {
        const RuleSearchEntry* canonical = report.canonical();
        if (!canonical) throw std::runtime_error("no exact match; refusing to write a canonical configuration");
        EngineSettings s = common.settings();
        s.pattern2d = canonical->config.rules_2d(a.length);
        s.pattern3d = canonical->config.rules_3d(a.length);
        std::ofstream out(a.write_config);
        out << to_json(s).dump(2) << "\n";
        if (!out) throw std::runtime_error("cannot write " + a.write_config);
    }
    return 0;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::string technique = "pattern3d";
    std::string pattern;
    bool all = false;
    std::size_t stride = 1;
    double sigma = 0.0;
    double latency = 0.0;
    std::uint64_t seed = 0;
    double speed = 150.0;
    double rate = 100.0;
    std::string pose;
    std::string out;
};

PhonePose parse_pose(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) v.push_back(std::stod(item));
    if (v.size() != 7) throw std::invalid_argument("--pose expects px,py,pz,qw,qx,qy,qz");
    Quaternion q{v[3], v[4], v[5], v[6]};
    const double n = q.norm();
    return {{v[0], v[1], v[2]}, {q.w / n, q.x / n, q.y / n, q.z / n}};
}

int run_synth(const Common& common, const SynthArgs& a) {
    const Technique t = technique_arg(a.technique);
    const EngineSettings s = common.settings();
    const RuleSet rules = s.rules_for(t);

    std::vector<std::vector<int>> targets;
    if (a.all) {
        if (t == Technique::Pin) throw std::invalid_argument("--all is only defined for patterns");
        std::size_t i = 0;
        for (const auto& p : enumerate_patterns(rules, t))
            if (i++ % std::max<std::size_t>(a.stride, 1) == 0) targets.push_back(to_code(p).digits);
    } else {
        if (a.pattern.empty()) throw std::invalid_argument("give --pattern or --all");
        targets.push_back(parse_digit_list(a.pattern));
    }
    const std::optional<PhonePose> pose = a.pose.empty() ? std::nullopt : std::optional(parse_pose(a.pose));

    Corpus corpus{layout_checksum(s.layout), {}};
    for (std::size_t i = 0; i < targets.size(); ++i) {
        TrajectorySpec spec;
        spec.target = {t, targets[i]};
        spec.speed_mm_per_s = a.speed;
        spec.sample_rate_hz = a.rate;
        spec.dwell_ms = s.dwell_ms;
        const NoiseModel noise{a.sigma, a.latency, derive_seed(a.seed, i)};
        CorpusStream stream;
        stream.id = "s" + std::to_string(i);
        stream.technique = t;
        stream.target = targets[i];
        stream.samples = synthesize(spec, noise, s.layout, rules);
        if (pose) {
            stream.frame = Frame::World;
            stream.pose = pose;
            for (auto& sample : stream.samples) sample = to_world(sample, *pose);
        }
        corpus.streams.push_back(std::move(stream));
    }
    if (a.out.empty() || a.out == "-")
        write_corpus(std::cout, corpus);
    else
        write_corpus(std::filesystem::path(a.out), corpus);
    return 0;
}

// ---------------------------------------------------------------- decode

struct DecodeArgs {
    std::string corpus;
    std::string secret;
    std::string feedback = "without_feedback";
    std::string log_out;
};

void check_layout(const Corpus& corpus, const Layout& layout) {
    if (corpus.layout_checksum != layout_checksum(layout))
        std::cerr << "warning: corpus layout checksum " << corpus.layout_checksum
                  << " differs from the configured layout\n";
}

int run_decode(const Common& common, const DecodeArgs& a) {
    const EngineSettings s = common.settings();
    const Corpus corpus = read_corpus(std::filesystem::path(a.corpus));
    check_layout(corpus, s.layout);
    std::ofstream log_out;
    if (!a.log_out.empty()) {
        log_out.open(a.log_out);
        if (!log_out) throw std::runtime_error("cannot write " + a.log_out);
    }
    int accepted = 0;
    for (const auto& stream : corpus.streams) {
        DecoderConfig config = s.decoder_config(stream.technique);
        config.feedback_mode = parse_feedback_mode(a.feedback);
        std::vector<int> secret = a.secret.empty() ? stream.target.value_or(std::vector<int>{}) : parse_digit_list(a.secret);
        const auto samples = local_samples(stream);
        Json rec{{"stream", stream.id}, {"technique", to_string(stream.technique)}};
        try {
            const DecodeResult r = decode_stream(samples, config, {stream.technique, secret});
            const SessionMetrics m = session_metrics(r.log);
            accepted += r.outcome == Outcome::Accepted;
            rec["outcome"] = to_string(r.outcome);
            rec["entered"] = r.entered.digits;
            rec["entry_time_ms"] = m.entry_time_ms;
            rec["time_from_first_ms"] = m.time_from_first_ms;
            if (log_out) {
                Json l = to_json(r.log);
                l["stream"] = stream.id;
                log_out << l.dump() << "\n";
            }
        } catch (const DecodeError& e) {
            rec["outcome"] = "ERROR";
            rec["error"] = e.what();
        }
        if (common.records()) {
            std::cout << rec.dump() << "\n";
        } else {
            std::cout << std::left << std::setw(8) << stream.id << std::setw(26) << rec["outcome"].get<std::string>();
            if (rec.contains("entered"))
                std::cout << std::setw(14) << format_digit_list(rec["entered"].get<std::vector<int>>()) << std::right
                          << std::fixed << std::setprecision(1) << std::setw(10) << rec["entry_time_ms"].get<double>()
                          << " ms";
            std::cout << "\n";
        }
    }
    if (!common.records())
        std::cout << accepted << "/" << corpus.streams.size() << " accepted\n";
    return 0;
}

// ---------------------------------------------------------------- attack

struct AttackArgs {
    std::string corpus;
    std::string technique = "pattern3d";
    std::string pattern;
    std::string confusion = "uniform";
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    bool all = false;
};

DepthConfusion parse_confusion(const std::string& text) {
    if (text == "identity") return DepthConfusion::identity();
    if (text == "uniform") return DepthConfusion::uniform();
    if (text.rfind("blend:", 0) == 0) return DepthConfusion::blend(std::stod(text.substr(6)));
    std::vector<double> v;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) v.push_back(std::stod(item));
    if (v.size() != 9) throw std::invalid_argument("--confusion: identity, uniform, blend:<lambda> or 9 numbers");
    DepthConfusion c;
    for (int i = 0; i < 9; ++i) c.p[i / 3][i % 3] = v[i];
    c.check();
    return c;
}

int run_smudge(const Common& common, const AttackArgs& a) {
    const EngineSettings s = common.settings();
    const Corpus corpus = read_corpus(std::filesystem::path(a.corpus));
    check_layout(corpus, s.layout);
    for (const auto& stream : corpus.streams) {
        const auto samples = local_samples(stream);
        const auto log = touch_log(samples);
        const auto c = smudge_candidates(log, stream.technique, s.rules_for(stream.technique), s.layout);
        if (common.records()) {
            Json rec{{"stream", stream.id},  {"technique", to_string(stream.technique)},
                     {"contacts", log.contacts.size()}, {"full_space", c.full_space}, {"candidates", c.count}};
            std::cout << rec.dump() << "\n";
        } else {
            std::cout << std::left << std::setw(8) << stream.id << std::setw(11) << to_string(stream.technique)
                      << std::right << std::setw(8) << c.count << (c.full_space ? "  (full space)" : "") << "\n";
        }
    }
    return 0;
}

int run_shoulder(const Common& common, const AttackArgs& a) {
    const Technique t = technique_arg(a.technique);
    if (t == Technique::Pin) throw std::invalid_argument("the shoulder-surfing model covers patterns only");
    const EngineSettings s = common.settings();
    const DepthConfusion confusion = parse_confusion(a.confusion);
    const ShoulderSurfer surfer(t, s.rules_for(t));
    if (a.all) {
        double total = 0;
        std::size_t i = 0;
        for (const auto& p : surfer.space()) total += surfer.expected_guesses(p, confusion, a.trials, derive_seed(a.seed, i++));
        const double mean = total / static_cast<double>(surfer.space().size());
        if (common.records())
            std::cout << Json{{"technique", to_string(t)}, {"patterns", surfer.space().size()}, {"mean_expected_guesses", mean}}.dump()
                      << "\n";
        else
            std::cout << to_string(t) << ": mean expected guesses over " << surfer.space().size() << " patterns = "
                      << std::fixed << std::setprecision(4) << mean << "\n";
        return 0;
    }
    const Pattern pattern = to_pattern({t, parse_digit_list(a.pattern)});
    if (!validate_pattern(pattern, s.rules_for(t)).ok()) throw std::invalid_argument("pattern is not valid");
    const double e = surfer.expected_guesses(pattern, confusion, a.trials, a.seed);
    const auto ranking = surfer.rank(observe(pattern, confusion, a.seed), confusion, to_code(pattern));
    if (common.records()) {
        std::cout << Json{{"pattern", to_code(pattern).digits},
                          {"expected_guesses", e},
                          {"class_size", surfer.projection_class_size(pattern)},
                          {"rank_of_truth", *ranking.rank_of_truth}}
                         .dump()
                  << "\n";
    } else {
        std::cout << "projection class size " << surfer.projection_class_size(pattern) << "\n"
                  << "rank of truth (seed " << a.seed << ") " << *ranking.rank_of_truth << "\n"
                  << "expected guesses (" << a.trials << " trials) " << std::fixed << std::setprecision(4) << e << "\n";
        for (std::size_t i = 0; i < std::min<std::size_t>(ranking.guesses.size(), 20); ++i)
            std::cout << "  " << std::setw(3) << i + 1 << "  " << std::setw(14) << std::left
                      << format_digit_list(ranking.guesses[i].code.digits) << std::right << std::setprecision(6)
                      << ranking.guesses[i].likelihood << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- serve / replay

struct ServeArgs {
    std::string host;
    int port = -1;
    bool debug = false;
    std::string static_dir;
};

net::EngineServer* g_server = nullptr;

extern "C" void stop_server(int) {
    if (g_server) g_server->stop();
}

int run_serve(const Common& common, const ServeArgs& a) {
    EngineSettings s = common.settings();
    std::string host = s.bind_host;
    int port = s.port;
    if (const char* env = std::getenv(net::kBindEnv)) std::tie(host, port) = net::parse_host_port(env);
    if (!a.host.empty()) host = a.host;
    if (a.port >= 0) port = a.port;
    if (a.debug) s.debug = true;
    net::EngineServer server(s, a.static_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(a.static_dir));
    const int bound = server.bind(host, port);
    std::cerr << "engine listening on " << host << ":" << bound << (s.debug ? " (debug)" : "") << "\n";
    g_server = &server;
    std::signal(SIGINT, stop_server);
    std::signal(SIGTERM, stop_server);
    server.serve();
    g_server = nullptr;
    return 0;
}

struct ReplayArgs {
    std::string corpus;
    std::string connect = "127.0.0.1:7420";
    bool realtime = false;
    int retries = 5;
};

int run_replay(const Common& common, const ReplayArgs& a) {
    const Corpus corpus = read_corpus(std::filesystem::path(a.corpus));
    net::ReplayOptions options;
    std::tie(options.host, options.port) = net::parse_host_port(a.connect);
    options.realtime = a.realtime;
    options.max_retries = a.retries;
    for (const auto& record : net::replay_corpus(corpus, options)) {
        Json rec{{"stream", record.stream_id}, {"renders", record.renders.size()}};
        if (record.result) {
            rec["outcome"] = to_string(record.result->outcome);
            rec["entry_time_ms"] = record.result->metrics.entry_time_ms;
            rec["time_from_first_ms"] = record.result->metrics.time_from_first_ms;
            if (record.result->entered) rec["entered"] = *record.result->entered;
        } else {
            rec["outcome"] = "NONE";
        }
        if (!record.errors.empty()) rec["error"] = record.errors.back().message;
        if (common.records())
            std::cout << rec.dump() << "\n";
        else
            std::cout << std::left << std::setw(8) << record.stream_id << rec["outcome"].get<std::string>() << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- metrics

struct MetricsArgs {
    std::string logs;
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

int run_metrics(const Common& common, const MetricsArgs& a) {
    std::ifstream in(a.logs);
    if (!in) throw std::runtime_error("cannot open " + a.logs);
    std::map<std::string, std::vector<SessionMetrics>> by_technique;
    std::map<std::string, std::pair<int, int>> errors;  // rejected, total
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        SessionLog log;
        try {
            log = session_log_from_json(Json::parse(line));
        } catch (const std::exception& e) {
            throw std::runtime_error(a.logs + ":" + std::to_string(lineno) + ": " + e.what());
        }
        const SessionMetrics m = session_metrics(log);
        const std::string t(to_string(log.technique));
        by_technique[t].push_back(m);
        errors[t].second++;
        if (log.outcome != Outcome::Accepted) errors[t].first++;
        if (common.records())
            std::cout << Json{{"technique", t}, {"entry_time_ms", m.entry_time_ms}, {"time_from_first_ms", m.time_from_first_ms}}.dump()
                      << "\n";
    }
    if (!common.records()) {
        std::cout << std::left << std::setw(11) << "technique" << std::right << std::setw(9) << "sessions" << std::setw(16)
                  << "median_entry" << std::setw(18) << "median_from_first" << std::setw(12) << "error_rate" << "\n";
        for (const auto& [t, ms] : by_technique) {
            std::vector<double> entry, first;
            for (const auto& m : ms) {
                entry.push_back(m.entry_time_ms);
                first.push_back(m.time_from_first_ms);
            }
            const auto [rejected, total] = errors[t];
            std::cout << std::left << std::setw(11) << t << std::right << std::setw(9) << ms.size() << std::fixed
                      << std::setprecision(1) << std::setw(16) << median(entry) << std::setw(18) << median(first)
                      << std::setprecision(3) << std::setw(12) << static_cast<double>(rejected) / total << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pre-touch 3D pattern lock toolkit: password spaces, decoding, simulation, attacks, engine"};
    app.require_subcommand(1);
    Common common;

    EnumerateArgs enumerate_args;
    auto* enumerate = app.add_subcommand("enumerate", "count or list valid patterns");
    add_common(enumerate, common);
    enumerate->add_option("--technique", enumerate_args.technique, "pin | pattern2d | pattern3d");
    enumerate->add_option("--length", enumerate_args.length, "pattern length (default from config)");
    enumerate->add_flag("--list", enumerate_args.list, "print every pattern as a digit array");
    enumerate->add_flag("--naive", enumerate_args.naive, "use the brute-force oracle");

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand("validate", "check a pattern against the rules");
    add_common(validate, common);
    validate->add_option("--technique", validate_args.technique, "pin | pattern2d | pattern3d");
    validate->add_option("--pattern", validate_args.pattern, "comma-separated digit indices")->required();

    StrengthArgs strength_args;
    auto* strength = app.add_subcommand("strength", "password-space sizes and bits");
    add_common(strength, common);
    strength->add_option("--length", strength_args.length, "override the configured length");

    RuleSearchArgs rs_args;
    auto* rulesearch = app.add_subcommand("rulesearch", "search the rule lattice for target counts");
    add_common(rulesearch, common);
    rulesearch->add_option("--target-2d", rs_args.target_2d, "2D target count");
    rulesearch->add_option("--target-3d", rs_args.target_3d, "3D target count");
    rulesearch->add_option("--length", rs_args.length, "pattern length");
    rulesearch->add_option("--write-config", rs_args.write_config, "write the first match as a configuration file");

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "synthesize finger trajectories into a corpus");
    add_common(synth, common);
    synth->add_option("--technique", synth_args.technique, "pin | pattern2d | pattern3d");
    synth->add_option("--pattern", synth_args.pattern, "target digits");
    synth->add_flag("--all", synth_args.all, "one stream per valid pattern");
    synth->add_option("--stride", synth_args.stride, "with --all, keep every n-th pattern");
    synth->add_option("--sigma", synth_args.sigma, "jitter sigma, mm");
    synth->add_option("--latency", synth_args.latency, "latency, ms");
    synth->add_option("--seed", synth_args.seed, "noise seed");
    synth->add_option("--speed", synth_args.speed, "finger speed, mm/s");
    synth->add_option("--rate", synth_args.rate, "sample rate, Hz");
    synth->add_option("--pose", synth_args.pose, "emit WORLD samples under px,py,pz,qw,qx,qy,qz");
    synth->add_option("--out", synth_args.out, "output corpus file (default stdout)");

    DecodeArgs decode_args;
    auto* decode = app.add_subcommand("decode", "decode a corpus offline");
    add_common(decode, common);
    decode->add_option("--corpus", decode_args.corpus, "corpus file")->required();
    decode->add_option("--secret", decode_args.secret, "enrolled secret (default: each stream's target)");
    decode->add_option("--feedback", decode_args.feedback, "with_feedback | without_feedback");
    decode->add_option("--log-out", decode_args.log_out, "write session logs as JSON lines");

    AttackArgs attack_args;
    auto* attack = app.add_subcommand("attack", "smudge and shoulder-surfing models");
    attack->require_subcommand(1);
    auto* smudge = attack->add_subcommand("smudge", "smudge candidates per corpus session");
    add_common(smudge, common);
    smudge->add_option("--corpus", attack_args.corpus, "corpus file")->required();
    auto* shoulder = attack->add_subcommand("shoulder", "shoulder-surfing guess model");
    add_common(shoulder, common);
    shoulder->add_option("--technique", attack_args.technique, "pattern2d | pattern3d");
    shoulder->add_option("--pattern", attack_args.pattern, "observed pattern");
    shoulder->add_option("--confusion", attack_args.confusion, "identity | uniform | blend:<lambda> | 9 numbers");
    shoulder->add_option("--trials", attack_args.trials, "Monte-Carlo observations");
    shoulder->add_option("--seed", attack_args.seed, "seed");
    shoulder->add_flag("--all", attack_args.all, "mean over every valid pattern");

    ServeArgs serve_args;
    auto* serve = app.add_subcommand("serve", "run the networked engine");
    add_common(serve, common);
    serve->add_option("--host", serve_args.host, "bind host (overrides PRETOUCH_BIND and config)");
    serve->add_option("--port", serve_args.port, "bind port (overrides PRETOUCH_BIND and config)");
    serve->add_flag("--debug", serve_args.debug, "include entered codes and events in RESULT");
    serve->add_option("--static-dir", serve_args.static_dir, "serve files from this directory over HTTP GET");

    ReplayArgs replay_args;
    auto* replay = app.add_subcommand("replay", "replay a corpus into a running engine");
    add_common(replay, common);
    replay->add_option("--corpus", replay_args.corpus, "corpus file")->required();
    replay->add_option("--connect", replay_args.connect, "engine address host:port");
    replay->add_flag("--realtime", replay_args.realtime, "pace samples by their timestamps");
    replay->add_option("--retries", replay_args.retries, "connection retries");

    MetricsArgs metrics_args;
    auto* metrics = app.add_subcommand("metrics", "entry-time metrics from session logs");
    add_common(metrics, common);
    metrics->add_option("--logs", metrics_args.logs, "session log file (JSON lines)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*enumerate) return run_enumerate(common, enumerate_args);
        if (*validate) return run_validate(common, validate_args);
        if (*strength) return run_strength(common, strength_args);
        if (*rulesearch) return run_rulesearch(common, rs_args);
        if (*synth) return run_synth(common, synth_args);
        if (*decode) return run_decode(common, decode_args);
        if (*smudge) return run_smudge(common, attack_args);
        if (*shoulder) return run_shoulder(common, attack_args);
        if (*serve) return run_serve(common, serve_args);
        if (*replay) return run_replay(common, replay_args);
        if (*metrics) return run_metrics(common, metrics_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
