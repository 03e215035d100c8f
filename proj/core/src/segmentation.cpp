#include "aerotarget/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aerotarget::seg {

void SegmentationConfig::validate() const {
    if (k < 2) throw std::invalid_argument("seg.k must be >= 2");
    if (!(variance_target > 0.0) || variance_target > 1.0)
        throw std::invalid_argument("seg.variance_target must be in (0,1]");
}

num::FeatureMatrix hls_features(const ImageHls& img) {
    num::FeatureMatrix features(static_cast<int>(img.pixel_count()), 3);
    for (int i = 0; i < features.rows(); ++i) {
        const HlsPixel& p = img.data()[i];
        features.at(i, 0) = p.h / 360.0;
        features.at(i, 1) = p.l;
        features.at(i, 2) = p.s;
    }
    return features;
}

HlsPixel reconstruct_center(const num::PcaModel& pca, const num::MinMaxScaler& scaler,
                            const num::FeatureMatrix& scaled_points) {
    if (scaled_points.rows() < 1)
        throw std::invalid_argument("reconstruct_center: empty point set");
    const std::vector<double> med = num::coordinatewise_median(scaled_points);
    num::FeatureMatrix m(1, static_cast<int>(med.size()));
    std::copy(med.begin(), med.end(), m.row(0).begin());
    const num::FeatureMatrix unscaled = num::scaler_inverse(scaler, m);
    const num::FeatureMatrix hls = num::pca_inverse(pca, unscaled);

    HlsPixel out;
    out.h = static_cast<float>(std::clamp(hls.at(0, 0) * 360.0, 0.0, 360.0 - 1e-4));
    out.l = static_cast<float>(std::clamp(hls.at(0, 1), 0.0, 1.0));
    out.s = static_cast<float>(std::clamp(hls.at(0, 2), 0.0, 1.0));
    return out;
}

std::vector<Segment> segment(const ImageRgb& crop, const SegmentationConfig& cfg) {
    cfg.validate();
    if (crop.width() < 8 || crop.height() < 8)
        throw std::invalid_argument("segment: crop must be at least 8x8");

    const ImageHls hls = rgb_to_hls(crop);
    const num::FeatureMatrix features = hls_features(hls);

    const num::PcaModel pca = num::pca_fit(features, cfg.variance_target);
    const num::FeatureMatrix projected = num::pca_transform(pca, features);
    const num::MinMaxScaler scaler = num::scaler_fit(projected);
    const num::FeatureMatrix scaled = num::scaler_transform(scaler, projected);

    const num::KMeansResult km = num::kmeans_fit(scaled, cfg.k, cfg.seed);

    std::vector<Segment> segments;
    for (int c = 0; c < km.k; ++c) {
        std::vector<int> members;
        for (int i = 0; i < scaled.rows(); ++i)
            if (km.assignments[i] == c) members.push_back(i);
        if (members.empty()) continue;  // dropped; downstream expects fewer candidates

        num::FeatureMatrix pts(static_cast<int>(members.size()), scaled.cols());
        for (int i = 0; i < pts.rows(); ++i) {
            const auto src = scaled.row(members[i]);
            std::copy(src.begin(), src.end(), pts.row(i).begin());
        }

        Segment s;
        s.mask = BinaryMask(crop.width(), crop.height());
        for (int i : members) s.mask.data()[i] = 1;
        s.population = static_cast<std::int64_t>(members.size());
        s.center_hls = reconstruct_center(pca, scaler, pts);
        segments.push_back(std::move(s));
    }
    return segments;
}

}  // namespace aerotarget::seg
