#ifndef PRETOUCH_GRID_HPP
#define PRETOUCH_GRID_HPP

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pretouch {

enum class Technique { Pin, Pattern2D, Pattern3D };

std::string_view to_string(Technique technique);
/// Accepts "pin", "pattern2d", "pattern3d" (case-insensitive, also "pattern").
Technique parse_technique(std::string_view text);

inline constexpr int kGridSide = 3;
inline constexpr int kLayerCount = 3;
inline constexpr int kTopLayer = kLayerCount - 1;
/// Layer used by the single-layer 2D pattern lock (on the glass).
inline constexpr int kPattern2DLayer = 0;

/// A lattice point of the 3x3x3 cylinder cube. Layer 0 is closest to the
/// glass, layer 2 is the topmost layer (closest to the user).
struct GridPoint {
    int col = 0;
    int row = 0;
    int layer = 0;

    auto operator<=>(const GridPoint&) const = default;
};

bool in_grid(const GridPoint& p);

/// Digit index of a point: layer * 9 + row * 3 + col. The layer closest to
/// the screen holds digits 0..8, the topmost layer 18..26.
int digit_index(const GridPoint& p);
GridPoint point_from_digit(int digit);

int squared_distance(const GridPoint& a, const GridPoint& b);

struct Pattern {
    Technique technique = Technique::Pattern3D;
    std::vector<GridPoint> points;

    bool operator==(const Pattern&) const = default;
};

/// A secret or an entered code in its serialized form: digit indices for
/// patterns, digit values 0..9 for PINs.
struct Code {
    Technique technique = Technique::Pattern3D;
    std::vector<int> digits;

    bool operator==(const Code&) const = default;
    auto operator<=>(const Code&) const = default;
};

Code to_code(const Pattern& pattern);
/// Throws std::invalid_argument for PIN codes or out-of-range digits.
Pattern to_pattern(const Code& code);

/// "18,10,1,13" -> {18,10,1,13}. Throws std::invalid_argument on junk.
std::vector<int> parse_digit_list(std::string_view text);
std::string format_digit_list(const std::vector<int>& digits);

}  // namespace pretouch

#endif  // PRETOUCH_GRID_HPP
