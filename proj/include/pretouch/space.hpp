#ifndef PRETOUCH_SPACE_HPP
#define PRETOUCH_SPACE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pretouch/grid.hpp"
#include "pretouch/rules.hpp"

namespace pretouch {

/// Visitor for enumerated patterns; the span is only valid during the call.
using PatternVisitor = std::function<void(const std::vector<GridPoint>&)>;

/// Pruned depth-first enumeration of every valid pattern, in lexicographic
/// order of digit indices. Returns the number of patterns visited.
std::uint64_t for_each_pattern(const RuleSet& rules, Technique technique, const PatternVisitor& visit);

std::vector<Pattern> enumerate_patterns(const RuleSet& rules, Technique technique);
std::uint64_t count_patterns(const RuleSet& rules, Technique technique);

/// Largest length accepted by the brute-force oracle.
inline constexpr int kNaiveOracleMaxLength = 6;

/// Brute-force oracle: runs validate_pattern over all N^L point sequences.
/// Throws std::length_error above kNaiveOracleMaxLength.
std::vector<Pattern> enumerate_patterns_naive(const RuleSet& rules, Technique technique);

/// 10^length. Throws std::invalid_argument for length < 1 or > 19.
std::uint64_t pin_space_size(int length);

/// Upper bound stated for four 3D points without reuse, using the factors
/// 27 x 26 x 24 x 23 exactly as published. The product skips 25; the plain
/// no-reuse count is kNoReuseProduct4.
inline constexpr std::uint64_t kUpperBoundFactors[4] = {27, 26, 24, 23};
inline constexpr std::uint64_t kTheoreticalUpperBound = 387504;
/// 27 x 26 x 25 x 24: four distinct points in order. Not the cited number.
inline constexpr std::uint64_t kNoReuseProduct4 = 421200;

std::uint64_t theoretical_upper_bound();

/// log2(count). Throws std::invalid_argument for count == 0.
double strength_bits(std::uint64_t count);

/// One point of the rule-configuration lattice searched by rule_search.
/// The 3D rule set always starts on the top layer; the 2D start flag is a
/// free dimension.
struct RuleConfiguration {
    BypassPolicy bypass_policy = BypassPolicy::ForbidAlways;
    BypassScope bypass_scope = BypassScope::AllAxes;
    bool start_top_2d = false;
    int max_cross_layer_sq_dist = 3;

    bool operator==(const RuleConfiguration&) const = default;

    RuleSet rules_2d(int length) const;
    RuleSet rules_3d(int length) const;
};

/// policy x scope x start_top_2d x cap in {1,2,3}, in a fixed order.
std::vector<RuleConfiguration> rule_lattice();

struct RuleSearchEntry {
    RuleConfiguration config;
    std::uint64_t count_2d = 0;
    std::uint64_t count_3d = 0;
    std::uint64_t deviation = 0;
};

struct RuleSearchReport {
    std::vector<RuleSearchEntry> matches;
    /// Entries with the smallest total deviation; equals matches when any match.
    std::vector<RuleSearchEntry> nearest;
    std::vector<RuleSearchEntry> evaluated;

    const RuleSearchEntry* canonical() const { return matches.empty() ? nullptr : &matches.front(); }
};

/// Finds every lattice configuration whose counts equal the targets. An
/// absent target matches anything.
RuleSearchReport rule_search(std::optional<std::uint64_t> target_2d,
                             std::optional<std::uint64_t> target_3d,
                             int length);

}  // namespace pretouch

#endif  // PRETOUCH_SPACE_HPP
