#pragma once

#include <cstdint>
#include <vector>

#include "aerotarget/image.hpp"
#include "aerotarget/numerics.hpp"

namespace aerotarget::seg {

/// One cluster of a crop: its pixel mask, the reconstructed HLS center
/// (median in scaled-PCA space, mapped back), and the member pixel count.
struct Segment {
    BinaryMask mask;
    HlsPixel center_hls;
    std::int64_t population = 0;
};

struct SegmentationConfig {
    int k = 5;
    double variance_target = 0.95;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Pixel features fed to PCA: (hue/360, lightness, saturation), so hue does
/// not numerically dominate. Hue circularity is treated as linear.
num::FeatureMatrix hls_features(const ImageHls& img);

/// Median of the cluster's points in scaled-PCA space, inverted back through
/// the scaler and PCA to an HLS triple, clamped to valid channel ranges.
HlsPixel reconstruct_center(const num::PcaModel& pca, const num::MinMaxScaler& scaler,
                            const num::FeatureMatrix& scaled_points);

/// Clusters a crop into at most k segments (empty clusters omitted). Masks
/// partition the crop; deterministic for fixed (crop, cfg).
std::vector<Segment> segment(const ImageRgb& crop, const SegmentationConfig& cfg);

}  // namespace aerotarget::seg
