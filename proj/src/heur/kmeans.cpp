#include "enkit/heur/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "enkit/core/rng.hpp"

namespace enkit::heur {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points,
                    std::size_t k,
                    std::uint64_t seed,
                    std::size_t max_iters,
                    double tol) {
    const std::size_t n = points.size();
    if (k == 0) throw std::invalid_argument("kmeans: k must be positive");
    if (k > n) throw std::invalid_argument("kmeans: k exceeds point count");
    const std::size_t dim = points[0].size();
    for (const auto& p : points)
        if (p.size() != dim) throw std::invalid_argument("kmeans: mixed point dimensionality");

    // k distinct points as initial centroids (partial Fisher-Yates)
    std::mt19937_64 rng(core::mix64(seed));
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::vector<std::vector<double>> centroids;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(core::uniform_below(rng, n - i));
        std::swap(idx[i], idx[j]);
        centroids.push_back(points[idx[i]]);
    }

    KMeansResult res;
    res.labels.assign(n, 0);

    auto assign = [&]() {
        double inertia = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            std::size_t best = 0;
            double best_d = sq_dist(points[p], centroids[0]);
            for (std::size_t c = 1; c < k; ++c) {
                double d = sq_dist(points[p], centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            res.labels[p] = best;
            inertia += best_d;
        }
        return inertia;
    };

    double inertia = assign();
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        // recompute centroids
        std::vector<std::vector<double>> next(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t p = 0; p < n; ++p) {
            ++counts[res.labels[p]];
            for (std::size_t d = 0; d < dim; ++d) next[res.labels[p]][d] += points[p][d];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // re-seed an emptied cluster to the point farthest from its old centroid
                std::size_t far_p = 0;
                double far_d = -1.0;
                for (std::size_t p = 0; p < n; ++p) {
                    double d = sq_dist(points[p], centroids[c]);
                    if (d > far_d) {
                        far_d = d;
                        far_p = p;
                    }
                }
                next[c] = points[far_p];
            } else {
                for (std::size_t d = 0; d < dim; ++d) next[c][d] /= static_cast<double>(counts[c]);
            }
        }

        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) shift = std::max(shift, sq_dist(centroids[c], next[c]));
        centroids = std::move(next);
        inertia = assign();
        res.inertia_history.push_back(inertia);
        res.iterations = iter + 1;
        if (std::sqrt(shift) < tol) break;
    }

    res.centroids = std::move(centroids);
    res.inertia = inertia;
    return res;
}

}  // namespace enkit::heur
