#include "pretouch/simulation.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace pretouch {

namespace {

void check_target(const TrajectorySpec& spec, const RuleSet& rules) {
    if (!(spec.speed_mm_per_s > 0) || !(spec.sample_rate_hz > 0))
        throw std::invalid_argument("trajectory speed and sample rate must be positive");
    const Code& target = spec.target;
    if (target.technique == Technique::Pin) {
        if (!validate_pin(target.digits, rules.required_length))
            throw std::invalid_argument("target PIN is invalid");
        return;
    }
    const auto result = validate_pattern(to_pattern(target), rules);
    if (!result.ok())
        throw std::invalid_argument("target pattern is invalid: " + std::string(to_string(result.errors.front().kind)));
}

Vec3 at(const Vec2& xy, double z) { return {xy.x, xy.y, z}; }

}  // namespace

std::vector<Waypoint> plan_waypoints(const TrajectorySpec& spec, const Layout& layout, const RuleSet& rules) {
    check_target(spec, rules);
    const double hold = spec.dwell_ms + spec.dwell_margin_ms;
    std::vector<Waypoint> path;
    switch (spec.target.technique) {
        case Technique::Pattern3D: {
            path.push_back({spec.approach.value_or(at(layout.screen_center(), layout.top() + kApproachClearanceMm)), 0.0,
                            false});
            for (int d : spec.target.digits) {
                const GridPoint p = point_from_digit(d);
                path.push_back({at(layout.cell_centers[p.row][p.col], layout.mid_band(p.layer)), hold, false});
            }
            break;
        }
        case Technique::Pattern2D: {
            for (int d : spec.target.digits) {
                const GridPoint p = point_from_digit(d);
                path.push_back({at(layout.cell_centers[p.row][p.col], 0.0), spec.dwell_margin_ms, true});
            }
            // Lift off above the last point.
            path.push_back({path.back().position + Vec3{0, 0, kPinHoverMm}, 0.0, false});
            break;
        }
        case Technique::Pin: {
            for (int d : spec.target.digits) {
                const Vec2& key = layout.keypad.key_centers[d];
                path.push_back({at(key, kPinHoverMm), 0.0, false});
                path.push_back({at(key, 0.0), spec.dwell_margin_ms, true});
                path.push_back({at(key, kPinHoverMm), 0.0, false});
            }
            break;
        }
    }
    return path;
}

double planned_duration_ms(const std::vector<Waypoint>& path, double speed_mm_per_s) {
    double total = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0) total += norm(path[i].position - path[i - 1].position) / speed_mm_per_s * 1000.0;
        total += path[i].hold_ms;
    }
    return total;
}

namespace {

struct PathPiece {
    double t0 = 0.0;
    double t1 = 0.0;
    Vec3 from;
    Vec3 to;
    bool touch = false;
};

std::vector<PathPiece> timeline(const std::vector<Waypoint>& path, double speed) {
    std::vector<PathPiece> pieces;
    double t = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0) {
            const double move = norm(path[i].position - path[i - 1].position) / speed * 1000.0;
            if (move > 0) {
                pieces.push_back({t, t + move, path[i - 1].position, path[i].position,
                                  path[i - 1].touch && path[i].touch});
                t += move;
            }
        }
        if (path[i].hold_ms > 0 || i == 0) {
            pieces.push_back({t, t + path[i].hold_ms, path[i].position, path[i].position, path[i].touch});
            t += path[i].hold_ms;
        }
    }
    return pieces;
}

}  // namespace

std::vector<FingerSample> synthesize(const TrajectorySpec& spec, const NoiseModel& noise, const Layout& layout,
                                     const RuleSet& rules) {
    if (noise.jitter_sigma_mm < 0 || noise.latency_ms < 0)
        throw std::invalid_argument("noise parameters must be non-negative");
    const auto path = plan_waypoints(spec, layout, rules);
    const auto pieces = timeline(path, spec.speed_mm_per_s);
    const double duration = pieces.back().t1;
    const double dt = 1000.0 / spec.sample_rate_hz;

    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<FingerSample> out;
    std::size_t piece = 0;
    auto emit = [&](double t) {
        while (piece + 1 < pieces.size() && t >= pieces[piece].t1) ++piece;
        const PathPiece& p = pieces[piece];
        const double span = p.t1 - p.t0;
        const double u = span > 0 ? std::min(1.0, std::max(0.0, (t - p.t0) / span)) : 1.0;
        FingerSample s;
        s.t = t + noise.latency_ms;
        s.position = p.from + u * (p.to - p.from);
        s.touch = p.touch;
        s.frame = Frame::Local;
        if (noise.jitter_sigma_mm > 0) {
            s.position.x += noise.jitter_sigma_mm * gauss(rng);
            s.position.y += noise.jitter_sigma_mm * gauss(rng);
            s.position.z += noise.jitter_sigma_mm * gauss(rng);
        }
        out.push_back(s);
    };
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * dt;
        if (t > duration) break;
        emit(t);
    }
    if (out.back().t - noise.latency_ms < duration) emit(duration);
    return out;
}

std::vector<FingerSample> synthesize(const TrajectorySpec& spec, const NoiseModel& noise, const Layout& layout) {
    return synthesize(spec, noise, layout, RuleSet::canonical(spec.target.technique));
}

}  // namespace pretouch
