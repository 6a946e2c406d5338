#include "pretouch/space.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace pretouch {

namespace {

constexpr int kMaxPoints = kGridSide * kGridSide * kLayerCount;
using Mask = std::uint32_t;

int point_count(Technique technique) {
    switch (technique) {
        case Technique::Pattern2D: return kGridSide * kGridSide;
        case Technique::Pattern3D: return kMaxPoints;
        case Technique::Pin: break;
    }
    throw std::invalid_argument("pattern enumeration is undefined for PIN codes");
}

// Points of the technique's lattice indexed by position in digit order.
std::vector<GridPoint> lattice(Technique technique) {
    std::vector<GridPoint> pts;
    const int n = point_count(technique);
    const int layer_offset = technique == Technique::Pattern2D ? kPattern2DLayer * kGridSide * kGridSide : 0;
    for (int i = 0; i < n; ++i) pts.push_back(point_from_digit(layer_offset + i));
    return pts;
}

// Strict betweenness by collinearity scan; kept separate from
// segment_interior_points so the pruned search does not share it with the
// validator.
bool strictly_between(const GridPoint& a, const GridPoint& b, const GridPoint& q) {
    const int ux = b.col - a.col, uy = b.row - a.row, uz = b.layer - a.layer;
    const int vx = q.col - a.col, vy = q.row - a.row, vz = q.layer - a.layer;
    const bool collinear = uy * vz - uz * vy == 0 && uz * vx - ux * vz == 0 && ux * vy - uy * vx == 0;
    if (!collinear) return false;
    const int dot = ux * vx + uy * vy + uz * vz;
    const int len2 = ux * ux + uy * uy + uz * uz;
    return dot > 0 && dot < len2;
}

struct SearchTables {
    std::vector<GridPoint> points;
    std::array<std::array<Mask, kMaxPoints>, kMaxPoints> interior{};
    std::array<std::array<bool, kMaxPoints>, kMaxPoints> too_long{};
};

SearchTables build_tables(const RuleSet& rules, Technique technique) {
    SearchTables t;
    t.points = lattice(technique);
    const int n = static_cast<int>(t.points.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto& a = t.points[i];
            const auto& b = t.points[j];
            t.too_long[i][j] = a.layer != b.layer && squared_distance(a, b) > rules.max_cross_layer_sq_dist;
            if (rules.bypass_scope == BypassScope::WithinLayerOnly && a.layer != b.layer) continue;
            for (int k = 0; k < n; ++k)
                if (strictly_between(a, b, t.points[k])) t.interior[i][j] |= Mask{1} << k;
        }
    }
    return t;
}

struct Search {
    const SearchTables& tables;
    const RuleSet& rules;
    const PatternVisitor& visit;
    std::vector<GridPoint> prefix;
    std::vector<int> indices;
    std::uint64_t count = 0;

    bool can_extend(Mask used, int next) const {
        if (used & (Mask{1} << next)) return false;
        if (indices.empty()) return !rules.start_top_layer || tables.points[next].layer == kTopLayer;
        const int last = indices.back();
        if (tables.too_long[last][next]) return false;
        const Mask over = tables.interior[last][next];
        if (rules.bypass_policy == BypassPolicy::ForbidAlways) return over == 0;
        return (over & ~used) == 0;
    }

    void run(Mask used) {
        if (static_cast<int>(indices.size()) == rules.required_length) {
            ++count;
            if (visit) visit(prefix);
            return;
        }
        const int n = static_cast<int>(tables.points.size());
        for (int next = 0; next < n; ++next) {
            if (!can_extend(used, next)) continue;
            indices.push_back(next);
            prefix.push_back(tables.points[next]);
            run(used | (Mask{1} << next));
            prefix.pop_back();
            indices.pop_back();
        }
    }
};

}  // namespace

std::uint64_t for_each_pattern(const RuleSet& rules, Technique technique, const PatternVisitor& visit) {
    rules.check();
    const SearchTables tables = build_tables(rules, technique);
    if (rules.required_length > static_cast<int>(tables.points.size())) return 0;
    Search search{tables, rules, visit, {}, {}, 0};
    search.run(0);
    return search.count;
}

std::vector<Pattern> enumerate_patterns(const RuleSet& rules, Technique technique) {
    std::vector<Pattern> out;
    for_each_pattern(rules, technique, [&](const std::vector<GridPoint>& pts) { out.push_back({technique, pts}); });
    return out;
}

std::uint64_t count_patterns(const RuleSet& rules, Technique technique) {
    return for_each_pattern(rules, technique, nullptr);
}

std::vector<Pattern> enumerate_patterns_naive(const RuleSet& rules, Technique technique) {
    rules.check();
    if (rules.required_length > kNaiveOracleMaxLength)
        throw std::length_error("naive oracle refuses lengths above " + std::to_string(kNaiveOracleMaxLength));
    const auto pts = lattice(technique);
    const int n = static_cast<int>(pts.size());
    const int len = rules.required_length;

    // Odometer over all n^len sequences, most significant digit first, which
    // yields lexicographic order.
    std::vector<int> odo(len, 0);
    std::vector<Pattern> out;
    Pattern candidate{technique, std::vector<GridPoint>(len)};
    while (true) {
        for (int i = 0; i < len; ++i) candidate.points[i] = pts[odo[i]];
        if (validate_pattern(candidate, rules).ok()) out.push_back(candidate);
        int pos = len - 1;
        while (pos >= 0 && ++odo[pos] == n) odo[pos--] = 0;
        if (pos < 0) break;
    }
    return out;
}

std::uint64_t pin_space_size(int length) {
    if (length < 1 || length > 19) throw std::invalid_argument("PIN length must be in 1..19");
    std::uint64_t out = 1;
    for (int i = 0; i < length; ++i) out *= 10;
    return out;
}

std::uint64_t theoretical_upper_bound() { return kTheoreticalUpperBound; }

double strength_bits(std::uint64_t count) {
    if (count == 0) throw std::invalid_argument("strength_bits: empty password space");
    return std::log2(static_cast<double>(count));
}

RuleSet RuleConfiguration::rules_2d(int length) const {
    return {length, start_top_2d, max_cross_layer_sq_dist, bypass_policy, bypass_scope};
}

RuleSet RuleConfiguration::rules_3d(int length) const {
    return {length, true, max_cross_layer_sq_dist, bypass_policy, bypass_scope};
}

std::vector<RuleConfiguration> rule_lattice() {
    std::vector<RuleConfiguration> out;
    for (auto policy : {BypassPolicy::ForbidUnvisited, BypassPolicy::ForbidAlways, BypassPolicy::AutoInclude})
        for (auto scope : {BypassScope::AllAxes, BypassScope::WithinLayerOnly})
            for (bool start_top : {false, true})
                for (int cap : {3, 2, 1}) out.push_back({policy, scope, start_top, cap});
    return out;
}

RuleSearchReport rule_search(std::optional<std::uint64_t> target_2d,
                             std::optional<std::uint64_t> target_3d,
                             int length) {
    auto diff = [](std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; };
    RuleSearchReport report;
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (const auto& config : rule_lattice()) {
        RuleSearchEntry entry{config, count_patterns(config.rules_2d(length), Technique::Pattern2D),
                              count_patterns(config.rules_3d(length), Technique::Pattern3D), 0};
        if (target_2d) entry.deviation += diff(entry.count_2d, *target_2d);
        if (target_3d) entry.deviation += diff(entry.count_3d, *target_3d);
        if (entry.deviation == 0) report.matches.push_back(entry);
        if (entry.deviation < best) {
            best = entry.deviation;
            report.nearest.clear();
        }
        if (entry.deviation == best) report.nearest.push_back(entry);
        report.evaluated.push_back(entry);
    }
    return report;
}

}  // namespace pretouch
