#pragma once

#include <cstdint>
#include <vector>

namespace enkit::heur {

struct KMeansResult {
    std::vector<std::size_t> labels;             // point -> cluster
    std::vector<std::vector<double>> centroids;  // k centroids
    double inertia = 0.0;                        // sum of squared distances to own centroid
    std::vector<double> inertia_history;         // after each Lloyd iteration; non-increasing
    std::size_t iterations = 0;
};

// Lloyd's algorithm. Initial centroids are k distinct points drawn with the
// seeded generator; an emptied cluster is re-seeded to the point farthest
// from its centroid. Stops when the max centroid shift drops below tol or
// after max_iters. Throws std::invalid_argument if k == 0, k > n, or points
// have mixed dimensionality.
KMeansResult kmeans(const std::vector<std::vector<double>>& points,
                    std::size_t k,
                    std::uint64_t seed,
                    std::size_t max_iters = 100,
                    double tol = 1e-9);

}  // namespace enkit::heur
