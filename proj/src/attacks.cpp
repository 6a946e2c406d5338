#include "pretouch/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "pretouch/space.hpp"

namespace pretouch {

TouchLog touch_log(std::span<const FingerSample> samples) {
    TouchLog log;
    for (const auto& s : samples) {
        if (s.frame != Frame::Local) throw std::invalid_argument("touch_log expects LOCAL-frame samples");
        if (s.touch) log.contacts.push_back({s.position.x, s.position.y});
    }
    return log;
}

namespace {

CandidateSet full_space(std::uint64_t count) { return {true, count, {}}; }

CandidateSet pin_candidates(const TouchLog& log, const RuleSet& rules, const Layout& layout) {
    std::set<int> support;
    for (const auto& c : log.contacts)
        if (const auto d = keypad_hit(c, layout)) support.insert(*d);
    const int length = rules.required_length;
    if (support.empty()) return full_space(pin_space_size(length));

    CandidateSet out;
    if (static_cast<int>(support.size()) > length) return out;
    const std::vector<int> digits(support.begin(), support.end());
    const int k = static_cast<int>(digits.size());
    std::vector<int> odo(length, 0);
    while (true) {
        std::vector<int> code(length);
        std::vector<bool> used(k, false);
        for (int i = 0; i < length; ++i) {
            code[i] = digits[odo[i]];
            used[odo[i]] = true;
        }
        if (std::all_of(used.begin(), used.end(), [](bool u) { return u; }))
            out.codes.push_back({Technique::Pin, std::move(code)});
        int pos = length - 1;
        while (pos >= 0 && ++odo[pos] == k) odo[pos--] = 0;
        if (pos < 0) break;
    }
    out.count = out.codes.size();
    return out;
}

CandidateSet pattern2d_candidates(const TouchLog& log, const RuleSet& rules, const Layout& layout) {
    std::vector<GridPoint> trace;
    for (const auto& c : log.contacts) {
        FingerSample s;
        s.position = {c.x, c.y, 0.0};
        if (const auto hit = hit_test(s, layout, kPattern2DLayer); hit && (trace.empty() || trace.back() != *hit))
            trace.push_back(*hit);
    }
    if (trace.empty()) return full_space(count_patterns(rules, Technique::Pattern2D));

    CandidateSet out;
    std::vector<GridPoint> reversed(trace.rbegin(), trace.rend());
    for (const auto* seq : {&trace, &reversed}) {
        const Pattern p{Technique::Pattern2D, *seq};
        if (!validate_pattern(p, rules).ok()) continue;
        Code code = to_code(p);
        if (std::find(out.codes.begin(), out.codes.end(), code) == out.codes.end()) out.codes.push_back(code);
    }
    std::sort(out.codes.begin(), out.codes.end());
    out.count = out.codes.size();
    return out;
}

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<std::pair<int, int>> cells_of(const Pattern& pattern) {
    std::vector<std::pair<int, int>> cells;
    for (const auto& p : pattern.points) cells.emplace_back(p.col, p.row);
    return cells;
}

}  // namespace

CandidateSet smudge_candidates(const TouchLog& log, Technique technique, const RuleSet& rules, const Layout& layout) {
    switch (technique) {
        case Technique::Pattern3D:
            if (!log.contacts.empty())
                throw AttackError("3D pattern session left " + std::to_string(log.contacts.size()) +
                                  " contacts on the glass");
            return full_space(count_patterns(rules, Technique::Pattern3D));
        case Technique::Pattern2D: return pattern2d_candidates(log, rules, layout);
        case Technique::Pin: return pin_candidates(log, rules, layout);
    }
    throw std::invalid_argument("unknown technique");
}

void DepthConfusion::check() const {
    for (const auto& row : p) {
        double sum = 0;
        for (double v : row) {
            if (!(v >= 0)) throw std::invalid_argument("depth confusion entries must be non-negative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("depth confusion rows must sum to 1");
    }
}

DepthConfusion DepthConfusion::identity() { return blend(0.0); }
DepthConfusion DepthConfusion::uniform() { return blend(1.0); }

DepthConfusion DepthConfusion::blend(double lambda) {
    if (!(lambda >= 0 && lambda <= 1)) throw std::invalid_argument("blend factor must be in [0, 1]");
    DepthConfusion c;
    for (int i = 0; i < kLayerCount; ++i)
        for (int j = 0; j < kLayerCount; ++j) c.p[i][j] = (1 - lambda) * (i == j ? 1.0 : 0.0) + lambda / kLayerCount;
    return c;
}

Observation observe(const Pattern& pattern, const DepthConfusion& confusion, std::uint64_t seed) {
    confusion.check();
    std::mt19937_64 rng(seed);
    Observation obs{pattern.technique, cells_of(pattern), {}};
    for (const auto& p : pattern.points) {
        if (pattern.technique != Technique::Pattern3D) {
            obs.layers.push_back(p.layer);
            continue;
        }
        const auto& row = confusion.p[p.layer];
        const double u = unit_uniform(rng);
        double acc = 0.0;
        int reported = kLayerCount - 1;
        for (int j = 0; j < kLayerCount; ++j) {
            acc += row[j];
            if (u < acc) {
                reported = j;
                break;
            }
        }
        // Guard against rounding leaving u >= acc on zero-probability tails.
        while (row[reported] == 0.0 && reported > 0) --reported;
        obs.layers.push_back(reported);
    }
    return obs;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ShoulderSurfer::ShoulderSurfer(Technique technique, const RuleSet& rules)
    : technique_(technique), space_(enumerate_patterns(rules, technique)) {
    for (std::size_t i = 0; i < space_.size(); ++i) by_cells_[cells_of(space_[i])].push_back(i);
}

GuessRanking ShoulderSurfer::rank(const Observation& obs, const DepthConfusion& confusion,
                                  const std::optional<Code>& truth) const {
    confusion.check();
    const auto it = by_cells_.find(obs.cells);
    if (it == by_cells_.end()) throw AttackError("no valid pattern matches the observed cell sequence");
    if (technique_ == Technique::Pattern3D && obs.layers.size() != obs.cells.size())
        throw AttackError("observation has mismatched cell and layer counts");

    GuessRanking ranking;
    for (std::size_t idx : it->second) {
        const Pattern& p = space_[idx];
        double likelihood = 1.0;
        if (technique_ == Technique::Pattern3D)
            for (std::size_t i = 0; i < p.points.size(); ++i) likelihood *= confusion.p[p.points[i].layer][obs.layers[i]];
        ranking.guesses.push_back({to_code(p), likelihood});
    }
    // Candidates arrive in lexicographic digit order; stability keeps it as
    // the tie-break.
    std::stable_sort(ranking.guesses.begin(), ranking.guesses.end(),
                     [](const RankedGuess& a, const RankedGuess& b) { return a.likelihood > b.likelihood; });
    if (truth) {
        for (std::size_t i = 0; i < ranking.guesses.size(); ++i)
            if (ranking.guesses[i].code == *truth) ranking.rank_of_truth = i + 1;
    }
    return ranking;
}

double ShoulderSurfer::expected_guesses(const Pattern& pattern, const DepthConfusion& confusion, std::size_t trials,
                                        std::uint64_t seed) const {
    if (trials == 0) throw std::invalid_argument("expected_guesses needs at least one trial");
    const Code truth = to_code(pattern);
    double total = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        const auto ranking = rank(observe(pattern, confusion, derive_seed(seed, i)), confusion, truth);
        if (!ranking.rank_of_truth) throw AttackError("true pattern missing from its own ranking");
        total += static_cast<double>(*ranking.rank_of_truth);
    }
    return total / static_cast<double>(trials);
}

double ShoulderSurfer::exact_expected_guesses(const Pattern& pattern, const DepthConfusion& confusion) const {
    const Code truth = to_code(pattern);
    Observation obs{pattern.technique, cells_of(pattern), std::vector<int>(pattern.points.size(), 0)};
    if (technique_ != Technique::Pattern3D) {
        for (std::size_t i = 0; i < pattern.points.size(); ++i) obs.layers[i] = pattern.points[i].layer;
        return static_cast<double>(*rank(obs, confusion, truth).rank_of_truth);
    }
    const std::size_t n = pattern.points.size();
    double expectation = 0.0;
    while (true) {
        double prob = 1.0;
        for (std::size_t i = 0; i < n; ++i) prob *= confusion.p[pattern.points[i].layer][obs.layers[i]];
        if (prob > 0) expectation += prob * static_cast<double>(*rank(obs, confusion, truth).rank_of_truth);
        std::size_t pos = n;
        while (pos > 0 && ++obs.layers[pos - 1] == kLayerCount) obs.layers[--pos] = 0;
        if (pos == 0) break;
    }
    return expectation;
}

std::size_t ShoulderSurfer::projection_class_size(const Pattern& pattern) const {
    const auto it = by_cells_.find(cells_of(pattern));
    return it == by_cells_.end() ? 0 : it->second.size();
}

GuessRanking rank_guesses(const Observation& obs, const DepthConfusion& confusion, const RuleSet& rules,
                          const std::optional<Code>& truth) {
    return ShoulderSurfer(obs.technique, rules).rank(obs, confusion, truth);
}

double expected_guesses(const Pattern& pattern, const DepthConfusion& confusion, const RuleSet& rules,
                        std::size_t trials, std::uint64_t seed) {
    return ShoulderSurfer(pattern.technique, rules).expected_guesses(pattern, confusion, trials, seed);
}

}  // namespace pretouch
