#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace aerotarget::num {

/// Deterministic 64-bit generator (splitmix64). Used everywhere randomness is
/// needed so results are bit-reproducible across platforms; std:: distributions
/// are avoided on purpose.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0,1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0,n), n >= 1.
    std::uint64_t next_below(std::uint64_t n) {
        // modulo bias negligible for the n used here; determinism matters more
        return next() % n;
    }

    /// Standard normal deviate (Box-Muller, both values consumed deterministically).
    double next_gaussian();

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Combines a master seed with a stream index into an independent seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Dense row-major matrix of n samples by d features.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(int rows, int cols, double fill = 0.0);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& at(int r, int c) { return v_[static_cast<std::size_t>(r) * cols_ + c]; }
    double at(int r, int c) const { return v_[static_cast<std::size_t>(r) * cols_ + c]; }

    std::span<double> row(int r) { return {&v_[static_cast<std::size_t>(r) * cols_], static_cast<std::size_t>(cols_)}; }
    std::span<const double> row(int r) const {
        return {&v_[static_cast<std::size_t>(r) * cols_], static_cast<std::size_t>(cols_)};
    }

    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> v_;
};

struct KMeansResult {
    int k = 0;
    FeatureMatrix centers;            // k x d
    std::vector<int> assignments;     // per sample, in [0,k)
    double inertia = 0.0;             // sum of squared distances to assigned centers
    std::vector<double> inertia_history;  // one entry per Lloyd iteration
};

/// Lloyd's algorithm with k-means++ seeding. Deterministic for fixed
/// (data, k, seed, max_iter); converges when assignments are stable.
/// Empty clusters are repaired by stealing the point farthest from its center.
KMeansResult kmeans_fit(const FeatureMatrix& data, int k, std::uint64_t seed, int max_iter = 100);

/// Weighted variant: each sample carries a multiplicity weight > 0. Equivalent
/// to running the plain fit on the expanded multiset.
KMeansResult kmeans_fit_weighted(const FeatureMatrix& data, std::span<const double> weights,
                                 int k, std::uint64_t seed, int max_iter = 100);

struct PcaModel {
    std::vector<double> mean;                      // d
    FeatureMatrix components;                      // m x d, orthonormal rows
    std::vector<double> explained_variance_ratio;  // m, non-increasing
};

/// Eigendecomposition of the sample covariance; retains the smallest m whose
/// cumulative explained-variance ratio reaches variance_target (at least 1).
/// Zero-variance data retains one component with ratio 1.
PcaModel pca_fit(const FeatureMatrix& data, double variance_target);

FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& data);
FeatureMatrix pca_inverse(const PcaModel& model, const FeatureMatrix& data);

struct MinMaxScaler {
    std::vector<double> mins;
    std::vector<double> maxs;
};

MinMaxScaler scaler_fit(const FeatureMatrix& data);
/// Maps per-dimension [min,max] to [0,1]; degenerate dimensions map to 0.
FeatureMatrix scaler_transform(const MinMaxScaler& s, const FeatureMatrix& data);
FeatureMatrix scaler_inverse(const MinMaxScaler& s, const FeatureMatrix& data);

/// Per-dimension median; even counts take the midpoint of the middle pair.
std::vector<double> coordinatewise_median(const FeatureMatrix& points);

}  // namespace aerotarget::num
