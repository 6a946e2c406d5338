#ifndef PRETOUCH_CORPUS_HPP
#define PRETOUCH_CORPUS_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pretouch/geometry.hpp"
#include "pretouch/grid.hpp"

namespace pretouch {

/// Corpus files are JSON lines:
///
///   {"format":"pretouch-corpus","version":1,"layout_checksum":"<16 hex>"}
///   {"stream":"<id>","technique":"pattern3d","frame":"LOCAL","target":[18,10,1,13]}
///   [t_ms, x_mm, y_mm, z_mm, touch]
///   ...
///
/// A stream record starts a new stream; the sample arrays that follow belong
/// to it. `target` and `pose` ({"pos":[x,y,z],"orient":[w,x,y,z]}) are
/// optional; `pose` is required for WORLD-frame streams.
struct CorpusStream {
    std::string id;
    Technique technique = Technique::Pattern3D;
    Frame frame = Frame::Local;
    std::optional<std::vector<int>> target;
    std::optional<PhonePose> pose;
    std::vector<FingerSample> samples;

    bool operator==(const CorpusStream&) const = default;
};

struct Corpus {
    std::string layout_checksum;
    std::vector<CorpusStream> streams;

    bool operator==(const Corpus&) const = default;
};

class CorpusError : public std::runtime_error {
public:
    CorpusError(std::size_t line, std::string field, const std::string& message);

    std::size_t line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

/// FNV-1a 64 over the layout's JSON form, as 16 lowercase hex digits.
std::string layout_checksum(const Layout& layout);

void write_corpus(std::ostream& out, const Corpus& corpus);
void write_corpus(const std::filesystem::path& path, const Corpus& corpus);

/// Throws CorpusError naming the 1-based line and the offending field.
Corpus read_corpus(std::istream& in);
Corpus read_corpus(const std::filesystem::path& path);

/// Samples of a stream in the phone frame (to_local applied to WORLD streams).
std::vector<FingerSample> local_samples(const CorpusStream& stream);

}  // namespace pretouch

#endif  // PRETOUCH_CORPUS_HPP
