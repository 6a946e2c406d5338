#ifndef PRETOUCH_ATTACKS_HPP
#define PRETOUCH_ATTACKS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pretouch/geometry.hpp"
#include "pretouch/grid.hpp"
#include "pretouch/rules.hpp"

namespace pretouch {

/// Contact points left on the glass during one session.
struct TouchLog {
    std::vector<Vec2> contacts;
};

TouchLog touch_log(std::span<const FingerSample> samples);

/// Smudge candidates. When `full_space` is set the trace carried no
/// information and `codes` is left empty; `count` is always the number of
/// candidates.
struct CandidateSet {
    bool full_space = false;
    std::uint64_t count = 0;
    std::vector<Code> codes;
};

/// Thrown when a touch log cannot come from the named technique.
class AttackError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pattern3D: expects an empty log, returns the whole valid space.
/// Pattern2D: the cell trace read forward and backward, filtered by validity.
/// PIN: all codes of the required length using exactly the touched digits.
CandidateSet smudge_candidates(const TouchLog& log, Technique technique, const RuleSet& rules, const Layout& layout);

/// C[i][j]: probability of reporting layer j when the true layer is i.
struct DepthConfusion {
    std::array<std::array<double, kLayerCount>, kLayerCount> p{};

    /// Throws std::invalid_argument unless rows are stochastic within 1e-9.
    void check() const;

    static DepthConfusion identity();
    static DepthConfusion uniform();
    /// (1 - lambda) * identity + lambda * uniform.
    static DepthConfusion blend(double lambda);
};

/// What a shoulder surfer records: the on-screen cell sequence exactly and
/// a noisy layer per point.
struct Observation {
    Technique technique = Technique::Pattern3D;
    std::vector<std::pair<int, int>> cells;  ///< (col, row)
    std::vector<int> layers;

    bool operator==(const Observation&) const = default;
};

Observation observe(const Pattern& pattern, const DepthConfusion& confusion, std::uint64_t seed);

struct RankedGuess {
    Code code;
    double likelihood = 0.0;
};

struct GuessRanking {
    std::vector<RankedGuess> guesses;
    std::optional<std::size_t> rank_of_truth;  ///< 1-based
};

/// Caches the enumerated space of one technique and indexes it by the
/// projected cell sequence, so repeated rankings stay cheap.
class ShoulderSurfer {
public:
    ShoulderSurfer(Technique technique, const RuleSet& rules);

    /// Throws AttackError when no valid pattern has the observed cells.
    GuessRanking rank(const Observation& obs, const DepthConfusion& confusion,
                      const std::optional<Code>& truth = std::nullopt) const;

    /// Monte-Carlo mean of rank-of-truth over `trials` observations; trial i
    /// uses a seed derived from (seed, i).
    double expected_guesses(const Pattern& pattern, const DepthConfusion& confusion, std::size_t trials,
                            std::uint64_t seed) const;

    /// Exact expectation over every possible observed layer sequence.
    double exact_expected_guesses(const Pattern& pattern, const DepthConfusion& confusion) const;

    /// Number of valid patterns sharing the pattern's projection.
    std::size_t projection_class_size(const Pattern& pattern) const;

    const std::vector<Pattern>& space() const { return space_; }
    Technique technique() const { return technique_; }

private:
    Technique technique_;
    std::vector<Pattern> space_;
    std::map<std::vector<std::pair<int, int>>, std::vector<std::size_t>> by_cells_;
};

GuessRanking rank_guesses(const Observation& obs, const DepthConfusion& confusion, const RuleSet& rules,
                          const std::optional<Code>& truth = std::nullopt);

double expected_guesses(const Pattern& pattern, const DepthConfusion& confusion, const RuleSet& rules,
                        std::size_t trials, std::uint64_t seed);

/// splitmix64 step; used to derive per-trial seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace pretouch

#endif  // PRETOUCH_ATTACKS_HPP
