#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "enkit/core/rng.hpp"
#include "enkit/ml/estimator.hpp"

namespace enkit::oracles {

// Central finite differences over every parameter; returns the worst
// relative disagreement with the analytic gradient.
inline double max_grad_rel_err(ml::Estimator& e, const ml::TrainingDataset& data,
                               double h = 1e-5) {
    const std::vector<double> p0 = e.parameters();
    const std::vector<double> analytic = e.gradient(data);
    double worst = 0.0;
    std::vector<double> p = p0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        p[j] = p0[j] + h;
        e.set_parameters(p);
        double up = e.mean_loss(data);
        p[j] = p0[j] - h;
        e.set_parameters(p);
        double down = e.mean_loss(data);
        p[j] = p0[j];
        double fd = (up - down) / (2.0 * h);
        double rel = std::abs(fd - analytic[j]) /
                     std::max({std::abs(fd), std::abs(analytic[j]), 1e-3});
        worst = std::max(worst, rel);
    }
    e.set_parameters(p0);
    return worst;
}

struct GradCase {
    ml::Estimator estimator;
    ml::TrainingDataset data;
};

// Random (estimator, batch) pair for differential gradient testing. Seeds
// whose hidden pre-activations sit within 1e-3 of the rectifier kink are
// skipped (finite differences straddle the kink there, analytic
// subgradients legitimately differ).
inline GradCase random_grad_case(std::uint64_t seed) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        std::mt19937_64 rng(core::derive_seed(seed, attempt, 0xfd));
        auto below = [&](std::size_t n) { return core::uniform_below(rng, n); };

        auto kind = static_cast<ml::OutputKind>(below(3));
        std::size_t dim = 2 + below(5);      // 2..6
        std::size_t hidden = 3 + below(6);   // 3..8
        std::size_t classes = 2 + below(3);  // 2..4
        std::size_t n = 4 + below(7);        // 4..10 examples

        // no standardization: the kink check below reads raw inputs
        std::vector<bool> mask(dim, false);
        ml::Estimator est(kind, dim, classes, mask, hidden, core::derive_seed(seed, attempt, 1));

        ml::TrainingDataset data;
        std::vector<double> row(dim);
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& v : row) v = core::uniform01(rng) * 4.0 - 2.0;
            double label = 0.0;
            switch (kind) {
                case ml::OutputKind::Binary: label = static_cast<double>(below(2)); break;
                case ml::OutputKind::Categorical: label = static_cast<double>(below(classes)); break;
                case ml::OutputKind::Continuous: label = core::uniform01(rng) * 2.0 - 1.0; break;
            }
            data.append(1, row, label);
        }
        est.fit(data, {.epochs = 0});  // freezes scaling, leaves weights at init

        // reject kink-adjacent cases
        bool near_kink = false;
        auto params = est.parameters();
        std::vector<double> x;
        for (std::size_t i = 0; i < n && !near_kink; ++i) {
            x.assign(data.row(i), data.row(i) + dim);
            // pre-activations from the flat layout [w1, b1, w2, b2]
            for (std::size_t hidx = 0; hidx < hidden && !near_kink; ++hidx) {
                double z = params[hidden * dim + hidx];  // b1
                for (std::size_t f = 0; f < dim; ++f) z += params[hidx * dim + f] * x[f];
                if (std::abs(z) < 1e-3) near_kink = true;
            }
        }
        if (near_kink) continue;
        return GradCase{std::move(est), std::move(data)};
    }
}

}  // namespace enkit::oracles
