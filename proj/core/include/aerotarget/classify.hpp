#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aerotarget/fpr.hpp"
#include "aerotarget/image.hpp"
#include "aerotarget/labels.hpp"
#include "aerotarget/segmentation.hpp"

namespace aerotarget::cls {

inline constexpr int kTemplateSide = 32;
inline constexpr int kTemplateWords = kTemplateSide * kTemplateSide / 64;
inline constexpr int kTemplateRotations = 36;
inline constexpr double kRotationStepDeg = 10.0;

inline constexpr double kCharSoftmaxTemperature = 0.05;
inline constexpr double kShapeSoftmaxTemperature = 0.1;

/// Crops to the foreground bounding box, pads to a square preserving aspect,
/// and resamples to 32x32 by nearest neighbor. Translation invariant by
/// construction. An empty mask throws.
BinaryMask normalize_mask(const BinaryMask& mask);

/// Pixel-wise OR; fills the character-shaped hole in a shape mask.
/// Dimension mismatch throws.
BinaryMask superimpose(const BinaryMask& char_mask, const BinaryMask& other_mask);

/// Nearest reference color by Manhattan distance in RGB after HLS->RGB
/// conversion. Ties resolve to the earliest entry in the reference table.
ColorClass classify_color(const HlsPixel& center_hls);

/// A classifier over one closed label set. Implementations are immutable
/// after construction and safe for concurrent predict calls.
class ClassifierModel {
public:
    virtual ~ClassifierModel() = default;
    virtual const std::vector<std::string>& labels() const = 0;
    virtual ClassDistribution predict(const BinaryMask& mask) const = 0;
};

/// One normalized 32x32 mask packed row-major into 64-bit words.
using TemplateBits = std::array<std::uint64_t, kTemplateWords>;

TemplateBits pack_template(const BinaryMask& normalized);
BinaryMask unpack_template(const TemplateBits& bits);

/// Intersection-over-union of the foreground bits: the normalized pixel
/// agreement score used for template matching. Zero when both are empty.
double jaccard_agreement(const TemplateBits& a, const TemplateBits& b);

/// 36 glyph classes x 36 rotations (10 degree steps) of normalized masks.
struct CharacterTemplateBank {
    std::array<std::array<TemplateBits, kTemplateRotations>, kNumCharClasses> templates{};
};

/// Baseline character classifier: per-class score is the best agreement over
/// the rotation bank; the distribution is a softmax over scores.
class CharacterTemplateModel final : public ClassifierModel {
public:
    explicit CharacterTemplateModel(CharacterTemplateBank bank);

    const std::vector<std::string>& labels() const override { return labels_; }
    ClassDistribution predict(const BinaryMask& mask) const override;

    const CharacterTemplateBank& bank() const { return *bank_; }

private:
    std::shared_ptr<const CharacterTemplateBank> bank_;
    std::vector<std::string> labels_;
};

inline constexpr int kNumShapeFeatures = 5;
using ShapeFeatureVec = std::array<double, kNumShapeFeatures>;

// Feature vector layout.
inline constexpr int kFeatCircularity = 0;  // 4*pi*A / P^2 of the traced outline
inline constexpr int kFeatSolidity = 1;     // A / convex hull area
inline constexpr int kFeatVertexCount = 2;  // polygon approximation, tol 2% of perimeter
inline constexpr int kFeatBoxFill = 3;      // A / bounding-extent area
inline constexpr int kFeatAspect = 4;       // sqrt(minor/major central second moment)

/// Contour features of the largest 8-connected component. Empty mask throws.
ShapeFeatureVec shape_features(const BinaryMask& mask);

/// Per-class feature centroids plus per-class per-feature whitening
/// divisors, both precomputed from rendered shape masks.
struct ShapeCentroidTable {
    std::array<ShapeFeatureVec, kNumShapeClasses> centroids{};
    std::array<ShapeFeatureVec, kNumShapeClasses> scales{};
};

/// Baseline shape classifier: nearest centroid in whitened feature space;
/// the distribution is a softmax over negative distances.
class ShapeFeatureModel final : public ClassifierModel {
public:
    explicit ShapeFeatureModel(ShapeCentroidTable table);

    const std::vector<std::string>& labels() const override { return labels_; }
    ClassDistribution predict(const BinaryMask& mask) const override;

    const ShapeCentroidTable& table() const { return table_; }

private:
    ShapeCentroidTable table_;
    std::vector<std::string> labels_;
};

ClassDistribution classify_character(const BinaryMask& mask, const ClassifierModel& model);
ClassDistribution classify_shape(const BinaryMask& mask, const ClassifierModel& model);

/// Final classification of one detected target.
struct TargetReport {
    BoundingBox box;
    char character = '?';
    ColorClass character_color = ColorClass::White;
    ShapeClass shape = ShapeClass::Square;
    ColorClass shape_color = ColorClass::White;
    double char_confidence = 0.0;
    double shape_confidence = 0.0;
};

/// Character-first classification of one ROI's structurally filtered
/// segments: gate character predictions, pick the most confident mask,
/// superimpose it into the remaining masks, gate shape predictions, pick the
/// most confident, then name both colors. Returns nullopt when either gate
/// leaves no survivor (the ROI is discarded as noise).
std::optional<TargetReport> classify_target(const BoundingBox& box,
                                            const std::vector<seg::Segment>& segments,
                                            const ClassifierModel& char_model,
                                            const ClassifierModel& shape_model,
                                            const fpr::FprConfig& cfg);

}  // namespace aerotarget::cls
