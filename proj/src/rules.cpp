#include "pretouch/rules.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pretouch {

std::string_view to_string(BypassPolicy policy) {
    switch (policy) {
        case BypassPolicy::ForbidUnvisited: return "FORBID_UNVISITED";
        case BypassPolicy::ForbidAlways: return "FORBID_ALWAYS";
        case BypassPolicy::AutoInclude: return "AUTO_INCLUDE";
    }
    return "?";
}

std::string_view to_string(BypassScope scope) {
    return scope == BypassScope::AllAxes ? "ALL_AXES" : "WITHIN_LAYER_ONLY";
}

BypassPolicy parse_bypass_policy(std::string_view text) {
    if (text == "FORBID_UNVISITED") return BypassPolicy::ForbidUnvisited;
    if (text == "FORBID_ALWAYS") return BypassPolicy::ForbidAlways;
    if (text == "AUTO_INCLUDE") return BypassPolicy::AutoInclude;
    throw std::invalid_argument("unknown bypass policy '" + std::string(text) + "'");
}

BypassScope parse_bypass_scope(std::string_view text) {
    if (text == "ALL_AXES") return BypassScope::AllAxes;
    if (text == "WITHIN_LAYER_ONLY") return BypassScope::WithinLayerOnly;
    throw std::invalid_argument("unknown bypass scope '" + std::string(text) + "'");
}

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::BadLength: return "BAD_LENGTH";
        case ViolationKind::ReusedPoint: return "REUSED_POINT";
        case ViolationKind::BadStartLayer: return "BAD_START_LAYER";
        case ViolationKind::SegmentTooLong: return "SEGMENT_TOO_LONG";
        case ViolationKind::BypassViolation: return "BYPASS_VIOLATION";
    }
    return "?";
}

void RuleSet::check() const {
    if (required_length < 1) throw std::invalid_argument("required_length must be >= 1");
    if (max_cross_layer_sq_dist < 1) throw std::invalid_argument("max_cross_layer_sq_dist must be >= 1");
}

RuleSet RuleSet::canonical(Technique technique) {
    RuleSet rules;
    rules.start_top_layer = technique == Technique::Pattern3D;
    return rules;
}

bool ValidationResult::has(ViolationKind kind) const {
    return std::any_of(errors.begin(), errors.end(), [kind](const ValidationError& e) { return e.kind == kind; });
}

std::vector<GridPoint> segment_interior_points(const GridPoint& a, const GridPoint& b) {
    if (a == b) throw std::invalid_argument("degenerate segment: endpoints coincide");
    const int dc = b.col - a.col, dr = b.row - a.row, dl = b.layer - a.layer;
    const int g = std::gcd(std::gcd(std::abs(dc), std::abs(dr)), std::abs(dl));
    std::vector<GridPoint> out;
    for (int k = 1; k < g; ++k)
        out.push_back({a.col + k * dc / g, a.row + k * dr / g, a.layer + k * dl / g});
    return out;
}

namespace {

bool crosses_scope(const GridPoint& a, const GridPoint& b, BypassScope scope) {
    return scope == BypassScope::AllAxes || a.layer == b.layer;
}

void check_points(const Pattern& pattern) {
    if (pattern.technique == Technique::Pin)
        throw std::invalid_argument("validate_pattern: PIN codes are validated with validate_pin");
    for (const auto& p : pattern.points) {
        if (!in_grid(p)) throw std::invalid_argument("validate_pattern: point outside the grid");
        if (pattern.technique == Technique::Pattern2D && p.layer != kPattern2DLayer)
            throw std::invalid_argument("validate_pattern: 2D pattern point off the 2D layer");
    }
}

}  // namespace

ValidationResult validate_pattern(const Pattern& pattern, const RuleSet& rules) {
    check_points(pattern);
    const auto& pts = pattern.points;
    ValidationResult result;
    if (static_cast<int>(pts.size()) != rules.required_length)
        result.errors.push_back({ViolationKind::BadLength, pts.size()});

    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (std::find(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(i), pts[i]) !=
            pts.begin() + static_cast<std::ptrdiff_t>(i))
            result.errors.push_back({ViolationKind::ReusedPoint, i});
    }

    if (rules.start_top_layer && !pts.empty() && pts.front().layer != kTopLayer)
        result.errors.push_back({ViolationKind::BadStartLayer, 0});

    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const GridPoint& a = pts[i];
        const GridPoint& b = pts[i + 1];
        if (a.layer != b.layer && squared_distance(a, b) > rules.max_cross_layer_sq_dist)
            result.errors.push_back({ViolationKind::SegmentTooLong, i});
        if (a == b || !crosses_scope(a, b, rules.bypass_scope)) continue;

        const auto interior = segment_interior_points(a, b);
        bool violated = false;
        if (rules.bypass_policy == BypassPolicy::ForbidAlways) {
            violated = !interior.empty();
        } else {
            // Both remaining policies require every passed-over point to be
            // used already; for AUTO_INCLUDE this says expansion is a no-op.
            const auto visited_end = pts.begin() + static_cast<std::ptrdiff_t>(i + 1);
            for (const auto& q : interior)
                if (std::find(pts.begin(), visited_end, q) == visited_end) violated = true;
        }
        if (violated) result.errors.push_back({ViolationKind::BypassViolation, i});
    }
    return result;
}

bool validate_pin(const std::vector<int>& digits, int required_length) {
    return static_cast<int>(digits.size()) == required_length &&
           std::all_of(digits.begin(), digits.end(), [](int d) { return d >= 0 && d <= 9; });
}

std::vector<GridPoint> expand_auto_include(const std::vector<GridPoint>& points, BypassScope scope) {
    std::vector<GridPoint> out;
    for (const auto& p : points) {
        if (!out.empty() && out.back() != p && crosses_scope(out.back(), p, scope)) {
            for (const auto& q : segment_interior_points(out.back(), p))
                if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace pretouch
