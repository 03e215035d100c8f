#include "aerotarget/labels.hpp"

#include <stdexcept>

namespace aerotarget {

char char_class_label(int index) {
    if (index < 0 || index >= kNumCharClasses)
        throw std::out_of_range("character class index out of range");
    return index < 26 ? static_cast<char>('A' + index) : static_cast<char>('0' + index - 26);
}

int char_class_index(char label) {
    if (label >= 'A' && label <= 'Z') return label - 'A';
    if (label >= '0' && label <= '9') return 26 + (label - '0');
    return -1;
}

namespace {

constexpr std::array<std::string_view, kNumShapeClasses> kShapeNames = {
    "square",        "rectangle",   "triangle", "trapezoid", "hexagon",
    "heptagon",      "octagon",     "quarter-circle", "semi-circle", "star",
    "cross",         "circle",      "pentagon",
};

constexpr std::array<std::string_view, kNumColorClasses> kColorNames = {
    "white", "black", "gray", "red", "blue", "green", "yellow", "purple", "brown", "orange",
};

constexpr std::array<Rgb8, kNumColorClasses> kColorRefs = {{
    {255, 255, 255},  // white
    {0, 0, 0},        // black
    {128, 128, 128},  // gray
    {255, 0, 0},      // red
    {0, 0, 255},      // blue
    {0, 128, 0},      // green
    {255, 255, 0},    // yellow
    {128, 0, 128},    // purple
    {150, 75, 0},     // brown
    {255, 165, 0},    // orange
}};

}  // namespace

std::string_view to_string(ShapeClass s) { return kShapeNames[static_cast<int>(s)]; }

ShapeClass shape_class_from_string(std::string_view name) {
    for (int i = 0; i < kNumShapeClasses; ++i)
        if (kShapeNames[i] == name) return static_cast<ShapeClass>(i);
    throw std::invalid_argument("unknown shape class: " + std::string(name));
}

ShapeClass shape_class_from_index(int index) {
    if (index < 0 || index >= kNumShapeClasses)
        throw std::out_of_range("shape class index out of range");
    return static_cast<ShapeClass>(index);
}

std::string_view to_string(ColorClass c) { return kColorNames[static_cast<int>(c)]; }

ColorClass color_class_from_string(std::string_view name) {
    for (int i = 0; i < kNumColorClasses; ++i)
        if (kColorNames[i] == name) return static_cast<ColorClass>(i);
    throw std::invalid_argument("unknown color class: " + std::string(name));
}

Rgb8 reference_rgb(ColorClass c) { return kColorRefs[static_cast<int>(c)]; }

int ClassDistribution::argmax() const {
    int best = 0;
    for (int i = 1; i < static_cast<int>(probabilities.size()); ++i)
        if (probabilities[i] > probabilities[best]) best = i;
    return best;
}

double ClassDistribution::max_probability() const {
    return probabilities.empty() ? 0.0 : probabilities[argmax()];
}

}  // namespace aerotarget
