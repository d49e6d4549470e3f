#pragma once

#include <cstddef>
#include <vector>

#include "enkit/ml/dataset.hpp"

namespace enkit::oracles {

// Linear-separability certificate via the perceptron algorithm: on a
// separable set it converges to a zero-mistake pass within the Novikoff
// bound, so a bounded run is an exact oracle for generated margins.
// Labels are 0/1; the first column (encoded horizon) is included like any
// other feature.
inline bool perceptron_separable(const ml::TrainingDataset& data, std::size_t max_passes = 5000) {
    std::vector<double> w(data.dim + 1, 0.0);  // trailing bias
    for (std::size_t pass = 0; pass < max_passes; ++pass) {
        bool mistakes = false;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double* x = data.row(i);
            double score = w[data.dim];
            for (std::size_t f = 0; f < data.dim; ++f) score += w[f] * x[f];
            double y = data.labels[i] > 0.5 ? 1.0 : -1.0;
            if (y * score <= 0.0) {
                mistakes = true;
                for (std::size_t f = 0; f < data.dim; ++f) w[f] += y * x[f];
                w[data.dim] += y;
            }
        }
        if (!mistakes) return true;
    }
    return false;
}

}  // namespace enkit::oracles
