#include "aerotarget/numerics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace aerotarget::num {

double SplitMix64::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = next_double();
    const double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double mag = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = mag * std::sin(two_pi * u2);
    have_spare_ = true;
    return mag * std::cos(two_pi * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 g(master ^ (0xA0761D6478BD642FULL + stream * 0xE7037ED1A0B428DBULL));
    return g.next();
}

FeatureMatrix::FeatureMatrix(int rows, int cols, double fill) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimensions");
    v_.assign(static_cast<std::size_t>(rows) * cols, fill);
}

namespace {

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Samples an index proportionally to probs (need not be normalized).
// Falls back to the last strictly positive entry on floating-point spill.
int sample_index(const std::vector<double>& probs, double total, SplitMix64& rng) {
    const double r = rng.next_double() * total;
    double cum = 0.0;
    int last_positive = -1;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
        if (probs[i] > 0.0) last_positive = i;
        cum += probs[i];
        if (r < cum && probs[i] > 0.0) return i;
    }
    return last_positive;
}

std::vector<int> plus_plus_seeding(const FeatureMatrix& data, std::span<const double> weights,
                                   int k, SplitMix64& rng) {
    const int n = data.rows();
    std::vector<int> centers;
    centers.reserve(k);

    std::vector<double> probs(weights.begin(), weights.end());
    double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    int first = sample_index(probs, total, rng);
    if (first < 0) first = 0;
    centers.push_back(first);

    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    while (static_cast<int>(centers.size()) < k) {
        const auto c = data.row(centers.back());
        total = 0.0;
        for (int i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], sq_dist(data.row(i), c));
            probs[i] = d2[i] * weights[i];
            total += probs[i];
        }
        int next = -1;
        if (total > 0.0) next = sample_index(probs, total, rng);
        if (next < 0) {
            // all remaining mass indistinguishable; take the first unused index
            std::vector<char> used(n, 0);
            for (int c2 : centers) used[c2] = 1;
            for (int i = 0; i < n; ++i) {
                if (!used[i]) {
                    next = i;
                    break;
                }
            }
            if (next < 0) next = static_cast<int>(centers.size()) % n;
        }
        centers.push_back(next);
    }
    return centers;
}

}  // namespace

KMeansResult kmeans_fit_weighted(const FeatureMatrix& data, std::span<const double> weights,
                                 int k, std::uint64_t seed, int max_iter) {
    const int n = data.rows();
    const int d = data.cols();
    if (n == 0) throw std::invalid_argument("kmeans_fit: empty data");
    if (k < 1) throw std::invalid_argument("kmeans_fit: k must be >= 1");
    if (k > n) {
        throw std::invalid_argument("kmeans_fit: k (" + std::to_string(k) +
                                    ") exceeds sample count (" + std::to_string(n) + ")");
    }
    if (max_iter < 1) throw std::invalid_argument("kmeans_fit: max_iter must be >= 1");
    if (static_cast<int>(weights.size()) != n)
        throw std::invalid_argument("kmeans_fit: weight count mismatch");

    SplitMix64 rng(seed);
    const std::vector<int> seed_idx = plus_plus_seeding(data, weights, k, rng);

    KMeansResult res;
    res.k = k;
    res.centers = FeatureMatrix(k, d);
    for (int c = 0; c < k; ++c) {
        const auto src = data.row(seed_idx[c]);
        std::copy(src.begin(), src.end(), res.centers.row(c).begin());
    }
    res.assignments.assign(n, -1);

    std::vector<int> prev(n, -1);
    std::vector<double> cluster_weight(k, 0.0);
    FeatureMatrix sums(k, d);

    auto nearest_center = [&](int i) {
        int best = 0;
        double best_d = sq_dist(data.row(i), res.centers.row(0));
        for (int c = 1; c < k; ++c) {
            const double dist = sq_dist(data.row(i), res.centers.row(c));
            if (dist < best_d) {
                best_d = dist;
                best = c;
            }
        }
        return best;
    };

    auto recompute_center = [&](int c) {
        auto row = res.centers.row(c);
        std::fill(row.begin(), row.end(), 0.0);
        double w = 0.0;
        for (int i = 0; i < n; ++i) {
            if (res.assignments[i] != c) continue;
            w += weights[i];
            const auto x = data.row(i);
            for (int j = 0; j < d; ++j) row[j] += weights[i] * x[j];
        }
        if (w > 0.0)
            for (int j = 0; j < d; ++j) row[j] /= w;
        cluster_weight[c] = w;
    };

    for (int iter = 0; iter < max_iter; ++iter) {
        for (int i = 0; i < n; ++i) res.assignments[i] = nearest_center(i);

        // repair empty clusters so k stays fixed through the iterations
        std::fill(cluster_weight.begin(), cluster_weight.end(), 0.0);
        for (int i = 0; i < n; ++i) cluster_weight[res.assignments[i]] += weights[i];
        for (int c = 0; c < k; ++c) {
            if (cluster_weight[c] > 0.0) continue;
            int far_i = -1;
            double far_d = -1.0;
            for (int i = 0; i < n; ++i) {
                if (cluster_weight[res.assignments[i]] <= weights[i]) continue;  // keep donors nonempty
                const double dist = sq_dist(data.row(i), res.centers.row(res.assignments[i]));
                if (dist > far_d) {
                    far_d = dist;
                    far_i = i;
                }
            }
            if (far_i < 0) continue;
            cluster_weight[res.assignments[far_i]] -= weights[far_i];
            res.assignments[far_i] = c;
            cluster_weight[c] = weights[far_i];
            const auto src = data.row(far_i);
            std::copy(src.begin(), src.end(), res.centers.row(c).begin());
        }

        double inertia = 0.0;
        for (int i = 0; i < n; ++i)
            inertia += weights[i] * sq_dist(data.row(i), res.centers.row(res.assignments[i]));
        assert(res.inertia_history.empty() || inertia <= res.inertia_history.back() + 1e-9);
        res.inertia_history.push_back(inertia);

        if (res.assignments == prev) break;
        prev = res.assignments;

        for (int c = 0; c < k; ++c) recompute_center(c);
    }

    // final assignment pass keeps the nearest-center invariant after the last
    // center update (ties resolve to the lowest index via strict <)
    for (int i = 0; i < n; ++i) res.assignments[i] = nearest_center(i);
    res.inertia = 0.0;
    for (int i = 0; i < n; ++i)
        res.inertia += weights[i] * sq_dist(data.row(i), res.centers.row(res.assignments[i]));
    return res;
}

KMeansResult kmeans_fit(const FeatureMatrix& data, int k, std::uint64_t seed, int max_iter) {
    const std::vector<double> w(static_cast<std::size_t>(std::max(data.rows(), 0)), 1.0);
    return kmeans_fit_weighted(data, w, k, seed, max_iter);
}

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns eigenvalues
// and eigenvectors (as rows), sorted by descending eigenvalue with a
// deterministic sign convention.
void symmetric_eigen(std::vector<double> a, int d, std::vector<double>& eigvals,
                     FeatureMatrix& eigvecs) {
    std::vector<double> v(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i) * d + i] = 1.0;

    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * d + j]; };
    auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * d + j]; };

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) off += A(i, j) * A(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < d - 1; ++p) {
            for (int q = p + 1; q < d; ++q) {
                if (std::fabs(A(p, q)) < 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < d; ++i) {
                    const double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = c * aip - s * aiq;
                    A(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < d; ++i) {
                    const double api = A(p, i), aqi = A(q, i);
                    A(p, i) = c * api - s * aqi;
                    A(q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < d; ++i) {
                    const double vpi = V(p, i), vqi = V(q, i);
                    V(p, i) = c * vpi - s * vqi;
                    V(q, i) = s * vpi + c * vqi;
                }
            }
        }
    }

    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(d);
    for (int i = 0; i < d; ++i) diag[i] = A(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return diag[i] > diag[j]; });

    eigvals.resize(d);
    eigvecs = FeatureMatrix(d, d);
    for (int r = 0; r < d; ++r) {
        eigvals[r] = diag[order[r]];
        auto out = eigvecs.row(r);
        for (int i = 0; i < d; ++i) out[i] = V(order[r], i);
        // deterministic sign: largest-magnitude entry positive
        int arg = 0;
        for (int i = 1; i < d; ++i)
            if (std::fabs(out[i]) > std::fabs(out[arg])) arg = i;
        if (out[arg] < 0.0)
            for (int i = 0; i < d; ++i) out[i] = -out[i];
    }
}

}  // namespace

PcaModel pca_fit(const FeatureMatrix& data, double variance_target) {
    const int n = data.rows();
    const int d = data.cols();
    if (n < 2) throw std::invalid_argument("pca_fit: need at least 2 samples");
    if (!(variance_target > 0.0) || variance_target > 1.0)
        throw std::invalid_argument("pca_fit: variance_target must be in (0,1]");

    PcaModel model;
    model.mean.assign(d, 0.0);
    for (int i = 0; i < n; ++i) {
        const auto row = data.row(i);
        for (int j = 0; j < d; ++j) model.mean[j] += row[j];
    }
    for (int j = 0; j < d; ++j) model.mean[j] /= n;

    std::vector<double> cov(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < n; ++i) {
        const auto row = data.row(i);
        for (int a = 0; a < d; ++a) {
            const double da = row[a] - model.mean[a];
            for (int b = a; b < d; ++b)
                cov[static_cast<std::size_t>(a) * d + b] += da * (row[b] - model.mean[b]);
        }
    }
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            cov[static_cast<std::size_t>(a) * d + b] /= (n - 1);
            cov[static_cast<std::size_t>(b) * d + a] = cov[static_cast<std::size_t>(a) * d + b];
        }

    std::vector<double> eigvals;
    FeatureMatrix eigvecs;
    symmetric_eigen(cov, d, eigvals, eigvecs);

    double total = 0.0;
    for (double& ev : eigvals) {
        if (ev < 0.0) ev = 0.0;  // numerical floor
        total += ev;
    }

    int m;
    std::vector<double> ratios(d, 0.0);
    if (total <= 0.0) {
        m = 1;
        ratios[0] = 1.0;  // zero-variance convention
    } else {
        for (int i = 0; i < d; ++i) ratios[i] = eigvals[i] / total;
        double cum = 0.0;
        m = d;
        for (int i = 0; i < d; ++i) {
            cum += ratios[i];
            if (cum >= variance_target - 1e-12) {
                m = i + 1;
                break;
            }
        }
    }

    model.components = FeatureMatrix(m, d);
    model.explained_variance_ratio.assign(ratios.begin(), ratios.begin() + m);
    for (int r = 0; r < m; ++r) {
        const auto src = eigvecs.row(r);
        std::copy(src.begin(), src.end(), model.components.row(r).begin());
    }
    return model;
}

FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& data) {
    const int d = static_cast<int>(model.mean.size());
    const int m = model.components.rows();
    if (data.cols() != d)
        throw std::invalid_argument("pca_transform: expected " + std::to_string(d) + " columns");
    FeatureMatrix out(data.rows(), m);
    for (int i = 0; i < data.rows(); ++i) {
        const auto x = data.row(i);
        for (int r = 0; r < m; ++r) {
            const auto w = model.components.row(r);
            double s = 0.0;
            for (int j = 0; j < d; ++j) s += (x[j] - model.mean[j]) * w[j];
            out.at(i, r) = s;
        }
    }
    return out;
}

FeatureMatrix pca_inverse(const PcaModel& model, const FeatureMatrix& data) {
    const int d = static_cast<int>(model.mean.size());
    const int m = model.components.rows();
    if (data.cols() != m)
        throw std::invalid_argument("pca_inverse: expected " + std::to_string(m) + " columns");
    FeatureMatrix out(data.rows(), d);
    for (int i = 0; i < data.rows(); ++i) {
        const auto y = data.row(i);
        auto x = out.row(i);
        for (int j = 0; j < d; ++j) x[j] = model.mean[j];
        for (int r = 0; r < m; ++r) {
            const auto w = model.components.row(r);
            for (int j = 0; j < d; ++j) x[j] += y[r] * w[j];
        }
    }
    return out;
}

MinMaxScaler scaler_fit(const FeatureMatrix& data) {
    if (data.rows() < 1) throw std::invalid_argument("scaler_fit: empty data");
    MinMaxScaler s;
    s.mins.assign(data.cols(), std::numeric_limits<double>::infinity());
    s.maxs.assign(data.cols(), -std::numeric_limits<double>::infinity());
    for (int i = 0; i < data.rows(); ++i) {
        const auto row = data.row(i);
        for (int j = 0; j < data.cols(); ++j) {
            s.mins[j] = std::min(s.mins[j], row[j]);
            s.maxs[j] = std::max(s.maxs[j], row[j]);
        }
    }
    return s;
}

FeatureMatrix scaler_transform(const MinMaxScaler& s, const FeatureMatrix& data) {
    const int d = static_cast<int>(s.mins.size());
    if (data.cols() != d)
        throw std::invalid_argument("scaler_transform: dimension mismatch");
    FeatureMatrix out(data.rows(), d);
    for (int i = 0; i < data.rows(); ++i) {
        for (int j = 0; j < d; ++j) {
            const double range = s.maxs[j] - s.mins[j];
            out.at(i, j) = range > 0.0 ? (data.at(i, j) - s.mins[j]) / range : 0.0;
        }
    }
    return out;
}

FeatureMatrix scaler_inverse(const MinMaxScaler& s, const FeatureMatrix& data) {
    const int d = static_cast<int>(s.mins.size());
    if (data.cols() != d)
        throw std::invalid_argument("scaler_inverse: dimension mismatch");
    FeatureMatrix out(data.rows(), d);
    for (int i = 0; i < data.rows(); ++i) {
        for (int j = 0; j < d; ++j) {
            const double range = s.maxs[j] - s.mins[j];
            out.at(i, j) = range > 0.0 ? data.at(i, j) * range + s.mins[j] : s.mins[j];
        }
    }
    return out;
}

std::vector<double> coordinatewise_median(const FeatureMatrix& points) {
    const int n = points.rows();
    if (n < 1) throw std::invalid_argument("coordinatewise_median: empty input");
    std::vector<double> med(points.cols());
    std::vector<double> col(n);
    for (int j = 0; j < points.cols(); ++j) {
        for (int i = 0; i < n; ++i) col[i] = points.at(i, j);
        const int mid = n / 2;
        std::nth_element(col.begin(), col.begin() + mid, col.end());
        if (n % 2 == 1) {
            med[j] = col[mid];
        } else {
            const double hi = col[mid];
            const double lo = *std::max_element(col.begin(), col.begin() + mid);
            med[j] = (lo + hi) / 2.0;
        }
    }
    return med;
}

}  // namespace aerotarget::num
