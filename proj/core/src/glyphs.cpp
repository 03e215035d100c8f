#include "aerotarget/glyphs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "aerotarget/labels.hpp"

namespace aerotarget::glyphs {

namespace {

constexpr double kPi = 3.14159265358979323846;

void seg(std::vector<Stroke>& v, double x0, double y0, double x1, double y1) {
    v.push_back({x0, y0, x1, y1});
}

// Elliptic arc sampled as a polyline. Angles in degrees, 0 = +x, 90 = +y
// (downward on screen); a1 may be smaller than a0 for a reverse sweep.
void arc(std::vector<Stroke>& v, double cx, double cy, double rx, double ry, double a0,
         double a1) {
    const double sweep = a1 - a0;
    const int n = std::max(4, static_cast<int>(std::ceil(std::fabs(sweep) / 20.0)));
    double px = cx + rx * std::cos(a0 * kPi / 180.0);
    double py = cy + ry * std::sin(a0 * kPi / 180.0);
    for (int i = 1; i <= n; ++i) {
        const double a = (a0 + sweep * i / n) * kPi / 180.0;
        const double qx = cx + rx * std::cos(a);
        const double qy = cy + ry * std::sin(a);
        seg(v, px, py, qx, qy);
        px = qx;
        py = qy;
    }
}

std::array<std::vector<Stroke>, kNumCharClasses> build_font() {
    std::array<std::vector<Stroke>, kNumCharClasses> font;
    auto g = [&](char c) -> std::vector<Stroke>& { return font[char_class_index(c)]; };

    seg(g('A'), 0.15, 1.00, 0.50, 0.04);
    seg(g('A'), 0.50, 0.04, 0.85, 1.00);
    seg(g('A'), 0.29, 0.64, 0.71, 0.64);

    seg(g('B'), 0.20, 0.04, 0.20, 0.96);
    seg(g('B'), 0.20, 0.04, 0.42, 0.04);
    seg(g('B'), 0.20, 0.50, 0.42, 0.50);
    seg(g('B'), 0.20, 0.96, 0.44, 0.96);
    arc(g('B'), 0.42, 0.27, 0.30, 0.23, -90, 90);
    arc(g('B'), 0.44, 0.73, 0.34, 0.23, -90, 90);

    arc(g('C'), 0.52, 0.50, 0.33, 0.46, 42, 318);

    seg(g('D'), 0.20, 0.04, 0.20, 0.96);
    arc(g('D'), 0.20, 0.50, 0.58, 0.46, -90, 90);

    seg(g('E'), 0.20, 0.04, 0.20, 0.96);
    seg(g('E'), 0.20, 0.04, 0.78, 0.04);
    seg(g('E'), 0.20, 0.50, 0.68, 0.50);
    seg(g('E'), 0.20, 0.96, 0.78, 0.96);

    seg(g('F'), 0.20, 0.04, 0.20, 0.96);
    seg(g('F'), 0.20, 0.04, 0.78, 0.04);
    seg(g('F'), 0.20, 0.50, 0.68, 0.50);

    arc(g('G'), 0.50, 0.50, 0.34, 0.46, 45, 315);
    seg(g('G'), 0.52, 0.58, 0.84, 0.58);
    seg(g('G'), 0.84, 0.58, 0.84, 0.80);

    seg(g('H'), 0.15, 0.04, 0.15, 0.96);
    seg(g('H'), 0.85, 0.04, 0.85, 0.96);
    seg(g('H'), 0.15, 0.50, 0.85, 0.50);

    seg(g('I'), 0.50, 0.04, 0.50, 0.96);
    seg(g('I'), 0.34, 0.04, 0.66, 0.04);
    seg(g('I'), 0.34, 0.96, 0.66, 0.96);

    seg(g('J'), 0.72, 0.04, 0.72, 0.72);
    seg(g('J'), 0.42, 0.04, 0.72, 0.04);
    arc(g('J'), 0.47, 0.72, 0.25, 0.22, 0, 140);

    seg(g('K'), 0.20, 0.04, 0.20, 0.96);
    seg(g('K'), 0.78, 0.04, 0.20, 0.56);
    seg(g('K'), 0.40, 0.42, 0.80, 0.96);

    seg(g('L'), 0.22, 0.04, 0.22, 0.96);
    seg(g('L'), 0.22, 0.96, 0.78, 0.96);

    seg(g('M'), 0.12, 0.96, 0.12, 0.04);
    seg(g('M'), 0.12, 0.04, 0.50, 0.58);
    seg(g('M'), 0.50, 0.58, 0.88, 0.04);
    seg(g('M'), 0.88, 0.04, 0.88, 0.96);

    seg(g('N'), 0.16, 0.96, 0.16, 0.04);
    seg(g('N'), 0.16, 0.04, 0.84, 0.96);
    seg(g('N'), 0.84, 0.96, 0.84, 0.04);

    arc(g('O'), 0.50, 0.50, 0.34, 0.46, 0, 360);

    seg(g('P'), 0.20, 0.04, 0.20, 0.96);
    seg(g('P'), 0.20, 0.04, 0.44, 0.04);
    seg(g('P'), 0.20, 0.52, 0.44, 0.52);
    arc(g('P'), 0.44, 0.28, 0.32, 0.24, -90, 90);

    arc(g('Q'), 0.50, 0.50, 0.34, 0.46, 0, 360);
    seg(g('Q'), 0.58, 0.66, 0.86, 0.97);

    seg(g('R'), 0.20, 0.04, 0.20, 0.96);
    seg(g('R'), 0.20, 0.04, 0.44, 0.04);
    seg(g('R'), 0.20, 0.52, 0.44, 0.52);
    arc(g('R'), 0.44, 0.28, 0.32, 0.24, -90, 90);
    seg(g('R'), 0.46, 0.52, 0.82, 0.96);

    arc(g('S'), 0.50, 0.27, 0.29, 0.23, 90, 330);
    arc(g('S'), 0.50, 0.73, 0.29, 0.23, 270, 510);

    seg(g('T'), 0.14, 0.04, 0.86, 0.04);
    seg(g('T'), 0.50, 0.04, 0.50, 0.96);

    seg(g('U'), 0.18, 0.04, 0.18, 0.66);
    seg(g('U'), 0.82, 0.04, 0.82, 0.66);
    arc(g('U'), 0.50, 0.66, 0.32, 0.28, 180, 0);

    seg(g('V'), 0.15, 0.04, 0.50, 0.96);
    seg(g('V'), 0.50, 0.96, 0.85, 0.04);

    seg(g('W'), 0.10, 0.04, 0.29, 0.96);
    seg(g('W'), 0.29, 0.96, 0.50, 0.30);
    seg(g('W'), 0.50, 0.30, 0.71, 0.96);
    seg(g('W'), 0.71, 0.96, 0.90, 0.04);

    seg(g('X'), 0.16, 0.04, 0.84, 0.96);
    seg(g('X'), 0.84, 0.04, 0.16, 0.96);

    seg(g('Y'), 0.15, 0.04, 0.50, 0.48);
    seg(g('Y'), 0.85, 0.04, 0.50, 0.48);
    seg(g('Y'), 0.50, 0.48, 0.50, 0.96);

    seg(g('Z'), 0.18, 0.04, 0.82, 0.04);
    seg(g('Z'), 0.82, 0.04, 0.18, 0.96);
    seg(g('Z'), 0.18, 0.96, 0.82, 0.96);

    arc(g('0'), 0.50, 0.50, 0.25, 0.46, 0, 360);

    seg(g('1'), 0.52, 0.04, 0.52, 0.96);
    seg(g('1'), 0.32, 0.26, 0.52, 0.04);
    seg(g('1'), 0.32, 0.96, 0.72, 0.96);

    arc(g('2'), 0.50, 0.30, 0.30, 0.26, 180, 345);
    seg(g('2'), 0.79, 0.25, 0.20, 0.96);
    seg(g('2'), 0.20, 0.96, 0.80, 0.96);

    arc(g('3'), 0.47, 0.28, 0.30, 0.24, 215, 450);
    arc(g('3'), 0.47, 0.74, 0.31, 0.24, 270, 505);

    seg(g('4'), 0.68, 0.96, 0.68, 0.04);
    seg(g('4'), 0.68, 0.04, 0.17, 0.66);
    seg(g('4'), 0.17, 0.66, 0.85, 0.66);

    seg(g('5'), 0.76, 0.04, 0.26, 0.04);
    seg(g('5'), 0.26, 0.04, 0.26, 0.44);
    seg(g('5'), 0.26, 0.44, 0.50, 0.44);
    arc(g('5'), 0.50, 0.69, 0.28, 0.25, 270, 510);

    seg(g('6'), 0.64, 0.04, 0.42, 0.32);
    seg(g('6'), 0.42, 0.32, 0.28, 0.56);
    arc(g('6'), 0.50, 0.70, 0.27, 0.26, 0, 360);

    seg(g('7'), 0.18, 0.04, 0.82, 0.04);
    seg(g('7'), 0.82, 0.04, 0.40, 0.96);
    seg(g('7'), 0.30, 0.52, 0.68, 0.52);

    arc(g('8'), 0.50, 0.27, 0.26, 0.22, 0, 360);
    arc(g('8'), 0.50, 0.735, 0.30, 0.235, 0, 360);

    arc(g('9'), 0.50, 0.30, 0.27, 0.26, 0, 360);
    seg(g('9'), 0.72, 0.44, 0.58, 0.80);
    seg(g('9'), 0.58, 0.80, 0.36, 0.96);

    return font;
}

double point_segment_dist_sq(double px, double py, const Stroke& s) {
    const double vx = s.x1 - s.x0, vy = s.y1 - s.y0;
    const double wx = px - s.x0, wy = py - s.y0;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? (wx * vx + wy * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = wx - t * vx, dy = wy - t * vy;
    return dx * dx + dy * dy;
}

}  // namespace

const std::vector<Stroke>& glyph_strokes(char c) {
    static const std::array<std::vector<Stroke>, kNumCharClasses> font = build_font();
    const int idx = char_class_index(c);
    if (idx < 0) throw std::invalid_argument(std::string("no glyph for character '") + c + "'");
    return font[idx];
}

void rasterize_glyph(char c, double height, double cx, double cy, double rotation_deg,
                     BinaryMask& canvas) {
    if (height <= 0.0) throw std::invalid_argument("rasterize_glyph: height must be positive");
    const double a = rotation_deg * kPi / 180.0;
    const double ca = std::cos(a), sa = std::sin(a);
    const double r = kStrokeHalfWidth * height;

    for (const Stroke& s : glyph_strokes(c)) {
        // unit box -> centered, scaled, rotated, translated canvas coordinates
        auto map = [&](double x, double y, double& ox, double& oy) {
            const double ux = (x - 0.5) * height;
            const double uy = (y - 0.5) * height;
            ox = cx + ux * ca - uy * sa;
            oy = cy + ux * sa + uy * ca;
        };
        Stroke t{};
        map(s.x0, s.y0, t.x0, t.y0);
        map(s.x1, s.y1, t.x1, t.y1);

        const int x_lo = std::max(0, static_cast<int>(std::floor(std::min(t.x0, t.x1) - r)));
        const int x_hi = std::min(canvas.width() - 1,
                                  static_cast<int>(std::ceil(std::max(t.x0, t.x1) + r)));
        const int y_lo = std::max(0, static_cast<int>(std::floor(std::min(t.y0, t.y1) - r)));
        const int y_hi = std::min(canvas.height() - 1,
                                  static_cast<int>(std::ceil(std::max(t.y0, t.y1) + r)));
        for (int y = y_lo; y <= y_hi; ++y) {
            for (int x = x_lo; x <= x_hi; ++x) {
                if (canvas.at(x, y)) continue;
                if (point_segment_dist_sq(x + 0.5, y + 0.5, t) <= r * r)
                    canvas.set(x, y, true);
            }
        }
    }
}

BinaryMask render_glyph(char c, int height, double rotation_deg) {
    if (height < 8) throw std::invalid_argument("render_glyph: height must be >= 8");
    // diagonal bound keeps any rotation inside the canvas
    const int canvas_size = static_cast<int>(std::ceil(height * 1.45)) + 2;
    BinaryMask canvas(canvas_size, canvas_size);
    rasterize_glyph(c, height, canvas_size / 2.0, canvas_size / 2.0, rotation_deg, canvas);
    return canvas;
}

}  // namespace aerotarget::glyphs
