#include "pretouch/corpus.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "pretouch/json_io.hpp"

namespace pretouch {

namespace {
constexpr const char* kFormatName = "pretouch-corpus";
constexpr int kFormatVersion = 1;
}  // namespace

CorpusError::CorpusError(std::size_t line, std::string field, const std::string& message)
    : std::runtime_error("corpus line " + std::to_string(line) + ", field '" + field + "': " + message),
      line_(line),
      field_(std::move(field)) {}

std::string layout_checksum(const Layout& layout) {
    const std::string text = to_json(layout).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
    out << Json{{"format", kFormatName}, {"version", kFormatVersion}, {"layout_checksum", corpus.layout_checksum}}.dump()
        << '\n';
    for (const auto& s : corpus.streams) {
        Json header{{"stream", s.id}, {"technique", to_string(s.technique)}, {"frame", to_string(s.frame)}};
        if (s.target) header["target"] = *s.target;
        if (s.pose) header["pose"] = to_json(*s.pose);
        out << header.dump() << '\n';
        for (const auto& p : s.samples)
            out << Json::array({p.t, p.position.x, p.position.y, p.position.z, p.touch ? 1 : 0}).dump() << '\n';
    }
}

void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write corpus " + path.string());
    write_corpus(out, corpus);
    if (!out) throw std::runtime_error("failed writing corpus " + path.string());
}

namespace {

double number(const Json& j, std::size_t line, const char* field) {
    if (!j.is_number()) throw CorpusError(line, field, "expected a number");
    return j.get<double>();
}

CorpusStream parse_stream_header(const Json& j, std::size_t line) {
    CorpusStream s;
    if (!j.at("stream").is_string()) throw CorpusError(line, "stream", "expected a string id");
    s.id = j.at("stream").get<std::string>();
    try {
        s.technique = parse_technique(j.at("technique").get<std::string>());
    } catch (const std::exception& e) {
        throw CorpusError(line, "technique", e.what());
    }
    try {
        s.frame = j.contains("frame") ? parse_frame(j.at("frame").get<std::string>()) : Frame::Local;
    } catch (const std::exception& e) {
        throw CorpusError(line, "frame", e.what());
    }
    if (j.contains("target")) {
        try {
            s.target = j.at("target").get<std::vector<int>>();
        } catch (const std::exception& e) {
            throw CorpusError(line, "target", e.what());
        }
    }
    if (j.contains("pose")) {
        try {
            s.pose = pose_from_json(j.at("pose"));
        } catch (const std::exception& e) {
            throw CorpusError(line, "pose", e.what());
        }
    }
    if (s.frame == Frame::World && !s.pose) throw CorpusError(line, "pose", "WORLD-frame stream needs a pose");
    return s;
}

FingerSample parse_sample(const Json& j, Frame frame, std::size_t line) {
    if (j.size() != 5) throw CorpusError(line, "sample", "expected [t_ms, x_mm, y_mm, z_mm, touch]");
    FingerSample s;
    s.t = number(j[0], line, "t_ms");
    s.position = {number(j[1], line, "x_mm"), number(j[2], line, "y_mm"), number(j[3], line, "z_mm")};
    if (!j[4].is_number_integer() || (j[4].get<int>() != 0 && j[4].get<int>() != 1))
        throw CorpusError(line, "touch", "expected 0 or 1");
    s.touch = j[4].get<int>() == 1;
    s.frame = frame;
    return s;
}

}  // namespace

Corpus read_corpus(std::istream& in) {
    Corpus corpus;
    std::string text;
    std::size_t line = 0;
    bool have_header = false;
    while (std::getline(in, text)) {
        ++line;
        if (text.empty()) continue;
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::parse_error& e) {
            throw CorpusError(line, "record", std::string("invalid JSON: ") + e.what());
        }
        if (!have_header) {
            if (!j.is_object() || j.value("format", "") != kFormatName)
                throw CorpusError(line, "format", "missing corpus header");
            if (j.value("version", 0) != kFormatVersion) throw CorpusError(line, "version", "unsupported version");
            if (!j.contains("layout_checksum") || !j.at("layout_checksum").is_string())
                throw CorpusError(line, "layout_checksum", "missing");
            corpus.layout_checksum = j.at("layout_checksum").get<std::string>();
            have_header = true;
            continue;
        }
        if (j.is_object()) {
            if (!j.contains("stream")) throw CorpusError(line, "stream", "expected a stream record");
            try {
                corpus.streams.push_back(parse_stream_header(j, line));
            } catch (const Json::exception& e) {
                throw CorpusError(line, "stream", e.what());
            }
            continue;
        }
        if (!j.is_array()) throw CorpusError(line, "sample", "expected an array");
        if (corpus.streams.empty()) throw CorpusError(line, "stream", "sample before any stream record");
        auto& stream = corpus.streams.back();
        FingerSample s = parse_sample(j, stream.frame, line);
        if (!stream.samples.empty() && s.t < stream.samples.back().t)
            throw CorpusError(line, "t_ms", "timestamp decreases");
        stream.samples.push_back(s);
    }
    if (!have_header) throw CorpusError(line, "format", "empty corpus file");
    return corpus;
}

Corpus read_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus " + path.string());
    return read_corpus(in);
}

std::vector<FingerSample> local_samples(const CorpusStream& stream) {
    if (stream.frame == Frame::Local) return stream.samples;
    std::vector<FingerSample> out;
    out.reserve(stream.samples.size());
    for (const auto& s : stream.samples) out.push_back(to_local(s, *stream.pose));
    return out;
}

}  // namespace pretouch
