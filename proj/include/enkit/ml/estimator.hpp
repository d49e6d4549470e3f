#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "enkit/ml/dataset.hpp"

namespace enkit::ml {

struct EstimateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OutputKind { Binary, Categorical, Continuous };

const char* to_string(OutputKind k);

struct TrainConfig {
    std::size_t epochs = 50;
    std::size_t batch = 32;
    double learning_rate = 0.01;
    std::uint64_t seed = 0;
};

// Feed-forward network with one 16-unit rectified-linear hidden layer and a
// kind-matched head: sigmoid + binary cross-entropy, softmax + categorical
// cross-entropy, or identity + squared error. Mini-batch gradient descent
// with seeded shuffling; everything is deterministic given (dataset, seed).
//
// Inputs are standardized per feature with statistics frozen at the first
// fit; the mask picks which features participate (encoded horizon and
// one-hot features stay raw).
class Estimator {
public:
    // classes: output width for Categorical, ignored (1) otherwise.
    Estimator(OutputKind kind, std::size_t in_dim, std::size_t classes,
              std::vector<bool> standardize_mask, std::size_t hidden = 16,
              std::uint64_t init_seed = 0);

    OutputKind kind() const { return kind_; }
    std::size_t in_dim() const { return in_dim_; }
    std::size_t out_dim() const { return out_dim_; }
    bool scaling_frozen() const { return frozen_; }
    bool degenerate_labels() const { return degenerate_; }

    // Freezes standardization statistics on first call; later calls continue
    // gradient descent from the current weights.
    void fit(const TrainingDataset& data, const TrainConfig& cfg);

    // Probability / distribution / value for one raw input row.
    std::vector<double> predict(const std::vector<double>& raw) const;

    double mean_loss(const TrainingDataset& data) const;

    // Flat parameter vector (W1, b1, W2, b2) for finite-difference checks.
    std::vector<double> parameters() const;
    void set_parameters(const std::vector<double>& flat);
    // Analytic gradient of mean_loss at the current parameters.
    std::vector<double> gradient(const TrainingDataset& data) const;

    // Versioned text checkpoint; hexfloat fields, bit-exact round trip.
    void save(std::ostream& out) const;
    static Estimator load(std::istream& in);

private:
    Estimator() = default;

    struct Scratch {
        std::vector<double> x, hidden_act, out, dz2;
        std::vector<double> gw1, gb1, gw2, gb2;
    };

    void scale_into(const double* raw, std::vector<double>& x) const;
    void forward(const std::vector<double>& x, std::vector<double>& hidden_act,
                 std::vector<double>& out) const;
    void freeze_scaling(const TrainingDataset& data);
    void zero_grads(Scratch& s) const;
    void accumulate_example(const double* raw, double y, Scratch& s) const;

    OutputKind kind_ = OutputKind::Binary;
    std::size_t in_dim_ = 0, hidden_ = 16, out_dim_ = 1;
    std::vector<double> w1_, b1_, w2_, b2_;  // w1: hidden x in, w2: out x hidden
    std::vector<bool> standardize_;
    std::vector<double> mean_, spread_;
    bool frozen_ = false;
    bool degenerate_ = false;  // binary fit saw a single label value
};

}  // namespace enkit::ml
