#include "pretouch/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Geometry>

namespace pretouch {

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::from_axis_angle(const Vec3& axis, double radians) {
    const double n = pretouch::norm(axis);
    if (n == 0.0) throw std::invalid_argument("rotation axis has zero length");
    const double s = std::sin(radians / 2) / n;
    return {std::cos(radians / 2), axis.x * s, axis.y * s, axis.z * s};
}

std::string_view to_string(Frame frame) { return frame == Frame::World ? "WORLD" : "LOCAL"; }

Frame parse_frame(std::string_view text) {
    if (text == "WORLD") return Frame::World;
    if (text == "LOCAL") return Frame::Local;
    throw std::invalid_argument("unknown frame '" + std::string(text) + "'");
}

namespace {

Eigen::Matrix3d rotation_of(const PhonePose& pose) {
    const auto& q = pose.orientation;
    if (std::abs(q.norm() - 1.0) > kOrientationTolerance)
        throw std::invalid_argument("phone orientation is not a unit quaternion");
    return Eigen::Quaterniond(q.w, q.x, q.y, q.z).normalized().toRotationMatrix();
}

Eigen::Vector3d as_eigen(const Vec3& v) { return {v.x, v.y, v.z}; }
Vec3 from_eigen(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

}  // namespace

FingerSample to_local(const FingerSample& sample, const PhonePose& pose) {
    if (sample.frame != Frame::World) throw std::invalid_argument("to_local expects a WORLD-frame sample");
    const Eigen::Matrix3d r = rotation_of(pose);
    FingerSample out = sample;
    out.position = from_eigen(r.transpose() * as_eigen(sample.position - pose.position));
    out.frame = Frame::Local;
    return out;
}

FingerSample to_world(const FingerSample& sample, const PhonePose& pose) {
    if (sample.frame != Frame::Local) throw std::invalid_argument("to_world expects a LOCAL-frame sample");
    const Eigen::Matrix3d r = rotation_of(pose);
    FingerSample out = sample;
    out.position = from_eigen(r * as_eigen(sample.position)) + pose.position;
    out.frame = Frame::World;
    return out;
}

Layout Layout::defaults() {
    Layout layout;
    const double pitch = kScreenWidthMm / kGridSide;
    const double cy = kScreenHeightMm / 2;
    for (int row = 0; row < kGridSide; ++row)
        for (int col = 0; col < kGridSide; ++col)
            layout.cell_centers[row][col] = {pitch / 2 + col * pitch, cy + (1 - row) * pitch};

    // 1 2 3 / 4 5 6 / 7 8 9 / _ 0 _ in the lower half of the screen.
    const double key_rows[4] = {70.0, 55.0, 40.0, 25.0};
    for (int d = 1; d <= 9; ++d)
        layout.keypad.key_centers[d] = {pitch / 2 + ((d - 1) % 3) * pitch, key_rows[(d - 1) / 3]};
    layout.keypad.key_centers[0] = {pitch / 2 + pitch, key_rows[3]};
    return layout;
}

Vec2 Layout::screen_center() const { return cell_centers[1][1]; }

void Layout::check() const {
    if (!(cylinder_radius > 0)) throw std::invalid_argument("layout: cylinder_radius must be positive");
    if (!(layer_thickness > 0)) throw std::invalid_argument("layout: layer_thickness must be positive");
    if (!(hysteresis_eps >= 0) || !(hysteresis_eps < layer_thickness / 2))
        throw std::invalid_argument("layout: hysteresis_eps must be in [0, layer_thickness/2)");
    for (int i = 0; i < kGridSide * kGridSide; ++i) {
        for (int j = i + 1; j < kGridSide * kGridSide; ++j) {
            const Vec2& a = cell_centers[i / kGridSide][i % kGridSide];
            const Vec2& b = cell_centers[j / kGridSide][j % kGridSide];
            if (std::hypot(a.x - b.x, a.y - b.y) <= 2 * cylinder_radius)
                throw std::invalid_argument("layout: cylinder footprints overlap");
        }
    }
    if (!(keypad.key_half_width > 0) || !(keypad.key_half_height > 0))
        throw std::invalid_argument("layout: keypad keys must have positive size");
}

LayerIndex quantize_layer(double z, const Layout& layout, LayerIndex previous_layer) {
    if (!(z >= layout.z0) || !(z < layout.top())) return std::nullopt;
    const int raw = std::min(kLayerCount - 1, static_cast<int>(std::floor((z - layout.z0) / layout.layer_thickness)));
    if (!previous_layer || *previous_layer == raw || std::abs(*previous_layer - raw) != 1) return raw;
    const double boundary = layout.z0 + std::max(*previous_layer, raw) * layout.layer_thickness;
    return std::abs(z - boundary) <= layout.hysteresis_eps ? previous_layer : LayerIndex{raw};
}

std::optional<GridPoint> hit_test(const FingerSample& sample, const Layout& layout, LayerIndex current_layer) {
    if (sample.frame != Frame::Local) throw std::invalid_argument("hit_test expects a LOCAL-frame sample");
    if (!current_layer) return std::nullopt;
    double best = std::numeric_limits<double>::infinity();
    GridPoint nearest;
    for (int row = 0; row < kGridSide; ++row) {
        for (int col = 0; col < kGridSide; ++col) {
            const Vec2& c = layout.cell_centers[row][col];
            const double d = std::hypot(sample.position.x - c.x, sample.position.y - c.y);
            if (d < best) {
                best = d;
                nearest = {col, row, *current_layer};
            }
        }
    }
    if (best <= layout.cylinder_radius) return nearest;
    return std::nullopt;
}

std::optional<int> keypad_hit(const Vec2& xy, const Layout& layout) {
    for (int d = 0; d <= 9; ++d) {
        const Vec2& c = layout.keypad.key_centers[d];
        if (std::abs(xy.x - c.x) <= layout.keypad.key_half_width &&
            std::abs(xy.y - c.y) <= layout.keypad.key_half_height)
            return d;
    }
    return std::nullopt;
}

std::string_view to_string(CursorColor color) {
    switch (color) {
        case CursorColor::None: return "NONE";
        case CursorColor::Red: return "RED";
        case CursorColor::Orange: return "ORANGE";
        case CursorColor::Yellow: return "YELLOW";
    }
    return "?";
}

CursorColor parse_cursor_color(std::string_view text) {
    if (text == "NONE") return CursorColor::None;
    if (text == "RED") return CursorColor::Red;
    if (text == "ORANGE") return CursorColor::Orange;
    if (text == "YELLOW") return CursorColor::Yellow;
    throw std::invalid_argument("unknown cursor color '" + std::string(text) + "'");
}

CursorColor color_for_layer(LayerIndex layer) {
    if (!layer) return CursorColor::None;
    switch (*layer) {
        case 0: return CursorColor::Red;
        case 1: return CursorColor::Orange;
        case 2: return CursorColor::Yellow;
        default: break;
    }
    throw std::invalid_argument("layer out of range");
}

CursorState make_cursor(const FingerSample& sample, const Layout& layout, LayerIndex layer) {
    return {{sample.position.x, sample.position.y},
            layer,
            color_for_layer(layer),
            1.0 + std::max(sample.position.z, 0.0) / (kLayerCount * layout.layer_thickness)};
}

ProjectedPoint project_orthogonal(const GridPoint& point, const Layout& layout) {
    if (!in_grid(point)) throw std::invalid_argument("project_orthogonal: point outside the grid");
    const Vec2& c = layout.cell_centers[point.row][point.col];
    return {{c.x + point.layer * layout.layer_offset.x, c.y + point.layer * layout.layer_offset.y},
            color_for_layer(point.layer)};
}

}  // namespace pretouch
