#ifndef PRETOUCH_RULES_HPP
#define PRETOUCH_RULES_HPP

#include <cstddef>
#include <string_view>
#include <vector>

#include "pretouch/grid.hpp"

namespace pretouch {

/// How a segment passing over an intermediate lattice point is treated.
enum class BypassPolicy {
    ForbidUnvisited,  ///< passing over a point is fine only if it was already used
    ForbidAlways,     ///< no segment may pass over any lattice point
    AutoInclude,      ///< passing over an unused point selects it (Android)
};

enum class BypassScope { AllAxes, WithinLayerOnly };

std::string_view to_string(BypassPolicy policy);
std::string_view to_string(BypassScope scope);
BypassPolicy parse_bypass_policy(std::string_view text);
BypassScope parse_bypass_scope(std::string_view text);

struct RuleSet {
    int required_length = 4;
    bool start_top_layer = true;
    /// Segments whose endpoints lie in different layers must have a squared
    /// lattice distance no larger than this (3 == sqrt(3) units).
    int max_cross_layer_sq_dist = 3;
    BypassPolicy bypass_policy = BypassPolicy::ForbidAlways;
    BypassScope bypass_scope = BypassScope::AllAxes;

    bool operator==(const RuleSet&) const = default;

    /// Throws std::invalid_argument when a field is out of range.
    void check() const;

    /// The configuration that reproduces the published password-space sizes.
    static RuleSet canonical(Technique technique);
};

enum class ViolationKind { BadLength, ReusedPoint, BadStartLayer, SegmentTooLong, BypassViolation };

std::string_view to_string(ViolationKind kind);

/// `index` is a point index for ReusedPoint/BadStartLayer, a segment index
/// (segment i joins points i and i+1) for SegmentTooLong/BypassViolation,
/// and the actual length for BadLength.
struct ValidationError {
    ViolationKind kind = ViolationKind::BadLength;
    std::size_t index = 0;

    bool operator==(const ValidationError&) const = default;
};

struct ValidationResult {
    std::vector<ValidationError> errors;

    bool ok() const { return errors.empty(); }
    bool has(ViolationKind kind) const;
};

/// Lattice points strictly between a and b, ordered from a towards b.
/// Throws std::invalid_argument when a == b.
std::vector<GridPoint> segment_interior_points(const GridPoint& a, const GridPoint& b);

/// Checks every rule and reports all violations. Throws std::invalid_argument
/// for PIN patterns, off-grid points, or 2D points off the 2D layer.
ValidationResult validate_pattern(const Pattern& pattern, const RuleSet& rules);

/// PIN codes: only the length and the digit range are checked.
bool validate_pin(const std::vector<int>& digits, int required_length);

/// Inserts unused interior points in front of every segment that passes
/// over them (the Android auto-include behaviour).
std::vector<GridPoint> expand_auto_include(const std::vector<GridPoint>& points,
                                           BypassScope scope = BypassScope::AllAxes);

}  // namespace pretouch

#endif  // PRETOUCH_RULES_HPP
