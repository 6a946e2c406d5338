#ifndef PRETOUCH_SIMULATION_HPP
#define PRETOUCH_SIMULATION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pretouch/geometry.hpp"
#include "pretouch/grid.hpp"
#include "pretouch/rules.hpp"

namespace pretouch {

/// Height above the top of the layer stack of the default approach point.
inline constexpr double kApproachClearanceMm = 40.0;
/// Height of the hover waypoint between PIN key presses.
inline constexpr double kPinHoverMm = 8.0;

struct TrajectorySpec {
    Code target;
    double speed_mm_per_s = 150.0;
    double sample_rate_hz = 100.0;
    /// Hover point the 3D trajectory starts from. Defaults to the screen
    /// centre, kApproachClearanceMm above the top layer.
    std::optional<Vec3> approach;
    /// Hold time at each target is dwell_ms + dwell_margin_ms.
    double dwell_ms = 50.0;
    double dwell_margin_ms = 100.0;
};

struct NoiseModel {
    double jitter_sigma_mm = 0.0;
    double latency_ms = 0.0;
    std::uint64_t seed = 0;
};

/// One vertex of a piecewise-linear finger path.
struct Waypoint {
    Vec3 position;
    double hold_ms = 0.0;
    bool touch = false;
};

/// Vertices visited by the synthesized path, in order. Throws
/// std::invalid_argument when the target violates `rules`.
std::vector<Waypoint> plan_waypoints(const TrajectorySpec& spec, const Layout& layout, const RuleSet& rules);

/// Noise-free duration of the path: total length / speed plus all holds.
double planned_duration_ms(const std::vector<Waypoint>& path, double speed_mm_per_s);

/// Samples the planned path at sample_rate_hz (plus one final sample at the
/// end of the last hold), adds per-axis Gaussian jitter and shifts every
/// timestamp by latency_ms. Deterministic for a fixed seed.
std::vector<FingerSample> synthesize(const TrajectorySpec& spec, const NoiseModel& noise, const Layout& layout,
                                     const RuleSet& rules);

/// Same, with the canonical rules of the target's technique.
std::vector<FingerSample> synthesize(const TrajectorySpec& spec, const NoiseModel& noise, const Layout& layout);

}  // namespace pretouch

#endif  // PRETOUCH_SIMULATION_HPP
