#include "pretouch/grid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

namespace pretouch {

std::string_view to_string(Technique technique) {
    switch (technique) {
        case Technique::Pin: return "pin";
        case Technique::Pattern2D: return "pattern2d";
        case Technique::Pattern3D: return "pattern3d";
    }
    return "?";
}

Technique parse_technique(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "pin") return Technique::Pin;
    if (lower == "pattern2d" || lower == "pattern") return Technique::Pattern2D;
    if (lower == "pattern3d") return Technique::Pattern3D;
    throw std::invalid_argument("unknown technique '" + std::string(text) + "'");
}

bool in_grid(const GridPoint& p) {
    auto ok = [](int v) { return v >= 0 && v < kGridSide; };
    return ok(p.col) && ok(p.row) && p.layer >= 0 && p.layer < kLayerCount;
}

int digit_index(const GridPoint& p) {
    return p.layer * kGridSide * kGridSide + p.row * kGridSide + p.col;
}

GridPoint point_from_digit(int digit) {
    if (digit < 0 || digit >= kGridSide * kGridSide * kLayerCount)
        throw std::invalid_argument("digit " + std::to_string(digit) + " is not a lattice point");
    return {digit % kGridSide, (digit / kGridSide) % kGridSide, digit / (kGridSide * kGridSide)};
}

int squared_distance(const GridPoint& a, const GridPoint& b) {
    const int dc = a.col - b.col, dr = a.row - b.row, dl = a.layer - b.layer;
    return dc * dc + dr * dr + dl * dl;
}

Code to_code(const Pattern& pattern) {
    Code code{pattern.technique, {}};
    code.digits.reserve(pattern.points.size());
    for (const auto& p : pattern.points) code.digits.push_back(digit_index(p));
    return code;
}

Pattern to_pattern(const Code& code) {
    if (code.technique == Technique::Pin) throw std::invalid_argument("a PIN code is not a pattern");
    Pattern pattern{code.technique, {}};
    for (int d : code.digits) pattern.points.push_back(point_from_digit(d));
    return pattern;
}

std::vector<int> parse_digit_list(std::string_view text) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(pos, end - pos);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
        int value = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
            throw std::invalid_argument("bad digit '" + std::string(item) + "' in list '" + std::string(text) + "'");
        out.push_back(value);
        pos = end + 1;
    }
    return out;
}

std::string format_digit_list(const std::vector<int>& digits) {
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(digits[i]);
    }
    return out;
}

}  // namespace pretouch
