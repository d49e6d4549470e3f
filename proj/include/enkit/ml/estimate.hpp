#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enkit/core/component.hpp"
#include "enkit/core/ensemble.hpp"
#include "enkit/ml/estimator.hpp"

namespace enkit::ml {

enum class Attachment { Component, Ensemble, ComponentEnsemblePair };

// What an estimate can see: the attached component and/or the attached
// ensemble's static binding, the population, and the clock. Unused pieces
// stay null for the simpler attachment kinds.
struct EstimateContext {
    const core::Population* pop = nullptr;
    const core::ComponentInstance* component = nullptr;
    const core::RoleBinding* ensemble = nullptr;
    core::TimeMin now = 0;
};

// Appends `dim` numbers derived from observable state at collection time.
struct FeatureExtractor {
    std::string name;
    std::size_t dim = 1;
    bool standardize = false;  // continuous features get frozen z-scaling
    std::function<void(const EstimateContext&, std::vector<double>&)> append;
};

struct EstimateSpec {
    std::string name;
    Attachment attachment = Attachment::ComponentEnsemblePair;
    std::vector<FeatureExtractor> inputs;
    OutputKind output = OutputKind::Binary;
    std::size_t classes = 2;  // categorical width
    // Reads the output attribute at the current time; may throw (the context
    // is then skipped and counted).
    std::function<double(const EstimateContext&)> output_of;
    std::int64_t min_t = 1, max_t = 1;  // prediction horizon, in ticks
    // Marks contexts whose data is valid at all (gates recording and label
    // linking); null means always valid.
    std::function<bool(const EstimateContext&)> guard;
    // Additionally gates input recording only: contexts whose inputs would
    // never be queried are not snapshotted, keeping the training inputs on
    // the same distribution as the queries. Null means record whenever the
    // guard passes.
    std::function<bool(const EstimateContext&)> relevance;
    std::size_t hidden = 16;
};

struct CollectionDiagnostics {
    std::size_t snapshots = 0;
    std::size_t examples = 0;
    std::size_t unreadable_outputs = 0;
    std::size_t clamped_queries = 0;
};

// A declared estimate plus its runtime state: the rolling input-history
// buffer, the accumulated dataset, and the trained model. Collection keys
// snapshots by (context id, tick) and links every admissible horizon
// t ∈ [min_t, max_t] from the current label back to the inputs recorded
// t ticks ago, so one pass over the run produces the full time-shifted set.
class ValueEstimate {
public:
    explicit ValueEstimate(EstimateSpec spec);

    const EstimateSpec& spec() const { return spec_; }
    std::size_t input_dim() const;  // 1 (encoded horizon) + extractor dims

    struct Observation {
        std::string id;  // stable context identity (component / ensemble / pair)
        EstimateContext ctx;
    };
    // Call once per tick with every attachment context present this tick.
    void collect_step(const std::vector<Observation>& contexts, core::TimeMin now);

    const TrainingDataset& dataset() const { return data_; }
    TrainingDataset& dataset() { return data_; }
    const CollectionDiagnostics& diagnostics() const { return diag_; }

    bool trained() const { return model_.has_value(); }
    // First call fits a fresh network; later calls continue gradient descent
    // from the current weights over everything collected so far. full_retrain
    // reinitializes instead.
    void train(const TrainConfig& cfg, bool full_retrain = false);
    const Estimator& model() const;
    void set_model(Estimator m);

    // Model output for the clamped horizon t = target_time - now.
    std::vector<double> predict_at(const EstimateContext& ctx, core::TimeMin target_time,
                                   core::TimeMin now);

    // [scaled t, features...] straight from current state; exposed for tests.
    std::vector<double> build_input(const EstimateContext& ctx, std::int64_t t) const;

    void reset_buffer();  // episode boundary: drop input history, keep data

private:
    double scale_t(std::int64_t t) const;

    EstimateSpec spec_;
    TrainingDataset data_;
    std::map<std::pair<std::string, core::TimeMin>, std::vector<double>> buffer_;
    std::map<core::TimeMin, std::vector<std::string>> buffer_times_;  // eviction index
    std::optional<Estimator> model_;
    CollectionDiagnostics diag_;
    std::uint64_t train_generation_ = 0;
};

}  // namespace enkit::ml
