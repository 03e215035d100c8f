#pragma once

#include <vector>

#include "aerotarget/image.hpp"

namespace aerotarget::glyphs {

/// One stroke of a glyph skeleton, in the glyph's unit box ([0,1]^2, y down).
/// Curves are stored as short polyline chains of these segments.
struct Stroke {
    double x0, y0, x1, y1;
};

inline constexpr double kStrokeHalfWidth = 0.075;

/// Stroke skeleton for one of the 36 classes 'A'-'Z', '0'-'9'.
const std::vector<Stroke>& glyph_strokes(char c);

/// Rasterizes a glyph onto an existing canvas, OR-ing the coverage in.
/// The glyph's unit box is scaled to `height` pixels, rotated by
/// `rotation_deg` around its own center, and centered at (cx, cy) in canvas
/// pixel coordinates. A pixel is foreground when its center lies within the
/// stroke width of the skeleton. No anti-aliasing.
void rasterize_glyph(char c, double height, double cx, double cy, double rotation_deg,
                     BinaryMask& canvas);

/// Renders a glyph on a tight standalone canvas.
BinaryMask render_glyph(char c, int height, double rotation_deg);

}  // namespace aerotarget::glyphs
