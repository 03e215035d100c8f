#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aerotarget/image.hpp"

namespace aerotarget {

// 36 alphanumeric classes: 'A'..'Z' then '0'..'9'.
inline constexpr int kNumCharClasses = 36;
char char_class_label(int index);           // index in [0,36)
int char_class_index(char label);           // -1 if not a class label

// 13 shape classes, in the rulebook listing order.
enum class ShapeClass : std::uint8_t {
    Square,
    Rectangle,
    Triangle,
    Trapezoid,
    Hexagon,
    Heptagon,
    Octagon,
    QuarterCircle,
    SemiCircle,
    Star,
    Cross,
    Circle,
    Pentagon,
};
inline constexpr int kNumShapeClasses = 13;
std::string_view to_string(ShapeClass s);
ShapeClass shape_class_from_string(std::string_view name);
ShapeClass shape_class_from_index(int index);

// 10 color classes with fixed reference RGB values.
enum class ColorClass : std::uint8_t {
    White,
    Black,
    Gray,
    Red,
    Blue,
    Green,
    Yellow,
    Purple,
    Brown,
    Orange,
};
inline constexpr int kNumColorClasses = 10;
std::string_view to_string(ColorClass c);
ColorClass color_class_from_string(std::string_view name);
Rgb8 reference_rgb(ColorClass c);

/// Normalized probability vector over one closed label set, in a fixed label
/// order. Probabilities are >= 0 and sum to 1 within 1e-6.
struct ClassDistribution {
    std::vector<std::string> labels;
    std::vector<double> probabilities;

    int argmax() const;
    double max_probability() const;
    const std::string& argmax_label() const { return labels[argmax()]; }
};

}  // namespace aerotarget
