#ifndef PRETOUCH_GEOMETRY_HPP
#define PRETOUCH_GEOMETRY_HPP

#include <array>
#include <optional>
#include <string_view>

#include "pretouch/grid.hpp"

namespace pretouch {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Vec2&) const = default;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const Vec3&) const = default;
};

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& v);
double norm(const Vec3& v);

/// Unit quaternion, scalar first.
struct Quaternion {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const Quaternion&) const = default;

    double norm() const;
    static Quaternion from_axis_angle(const Vec3& axis, double radians);
};

/// Phone pose in the tracker's world frame. The orientation rotates
/// phone-local vectors into the world frame.
struct PhonePose {
    Vec3 position;
    Quaternion orientation;

    bool operator==(const PhonePose&) const = default;
};

enum class Frame { World, Local };

std::string_view to_string(Frame frame);
Frame parse_frame(std::string_view text);

/// Local frame: x along the screen width (left to right), y along the
/// screen height (bottom to top), z along the outward normal. z is the
/// height above the glass in millimetres.
struct FingerSample {
    double t = 0.0;  ///< ms since session start
    Vec3 position;
    Frame frame = Frame::Local;
    bool touch = false;

    bool operator==(const FingerSample&) const = default;
};

/// Maps a world-frame sample into the phone frame. Throws
/// std::invalid_argument for local samples or a non-unit orientation.
FingerSample to_local(const FingerSample& sample, const PhonePose& pose);

/// Inverse of to_local, used when generating world-frame corpora.
FingerSample to_world(const FingerSample& sample, const PhonePose& pose);

inline constexpr double kOrientationTolerance = 1e-6;

/// PIN keypad: digit keys as axis-aligned rectangles on the glass.
struct Keypad {
    std::array<Vec2, 10> key_centers{};  ///< indexed by digit
    double key_half_width = 9.0;
    double key_half_height = 6.5;

    bool operator==(const Keypad&) const = default;
};

struct Layout {
    /// cell_centers[row][col]: row 0 is the top row of the grid.
    std::array<std::array<Vec2, kGridSide>, kGridSide> cell_centers{};
    double cylinder_radius = 9.0;
    double z0 = 10.0;
    double layer_thickness = 30.0;
    double hysteresis_eps = 3.0;
    /// Projection offset per layer step (up-right on screen).
    Vec2 layer_offset{6.0, 6.0};
    Keypad keypad;

    bool operator==(const Layout&) const = default;

    /// Grid sized for a 62 x 124 mm screen, 3x3 cells of pitch 62/3 mm
    /// centred on the screen.
    static Layout defaults();

    /// Throws std::invalid_argument when any layout invariant fails,
    /// including overlapping cylinder footprints.
    void check() const;

    double top() const { return z0 + kLayerCount * layer_thickness; }
    double mid_band(int layer) const { return z0 + (layer + 0.5) * layer_thickness; }
    Vec2 screen_center() const;
};

inline constexpr double kScreenWidthMm = 62.0;
inline constexpr double kScreenHeightMm = 124.0;

using LayerIndex = std::optional<int>;

/// Layer band of height z, keeping previous_layer while z lies within
/// hysteresis_eps of the boundary it shares with the raw layer.
LayerIndex quantize_layer(double z, const Layout& layout, LayerIndex previous_layer);

/// The cylinder under a local sample, in current_layer.
std::optional<GridPoint> hit_test(const FingerSample& sample, const Layout& layout, LayerIndex current_layer);

/// Digit key under a screen position, if any.
std::optional<int> keypad_hit(const Vec2& xy, const Layout& layout);

enum class CursorColor { None, Red, Orange, Yellow };

std::string_view to_string(CursorColor color);
CursorColor parse_cursor_color(std::string_view text);
CursorColor color_for_layer(LayerIndex layer);

struct CursorState {
    Vec2 xy;
    LayerIndex layer;
    CursorColor color = CursorColor::None;
    double depth_scale = 1.0;

    bool operator==(const CursorState&) const = default;
};

/// Cursor rendered for a local sample in the given layer. The cursor grows
/// with height: depth_scale = 1 + max(z, 0) / (3 * layer_thickness).
CursorState make_cursor(const FingerSample& sample, const Layout& layout, LayerIndex layer);

struct ProjectedPoint {
    Vec2 xy;
    CursorColor color = CursorColor::None;

    bool operator==(const ProjectedPoint&) const = default;
};

/// Orthogonal projection of a lattice point onto the screen.
ProjectedPoint project_orthogonal(const GridPoint& point, const Layout& layout);

}  // namespace pretouch

#endif  // PRETOUCH_GEOMETRY_HPP
