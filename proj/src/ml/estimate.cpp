#include "enkit/ml/estimate.hpp"

#include <algorithm>

#include "enkit/core/rng.hpp"

namespace enkit::ml {

ValueEstimate::ValueEstimate(EstimateSpec spec) : spec_(std::move(spec)) {
    if (spec_.name.empty()) throw EstimateError("estimate needs a name");
    if (spec_.min_t < 1 || spec_.min_t > spec_.max_t)
        throw EstimateError(spec_.name + ": horizon must satisfy 1 <= min_t <= max_t");
    if (!spec_.output_of) throw EstimateError(spec_.name + ": output reader missing");
    for (const auto& in : spec_.inputs)
        if (!in.append || in.dim == 0)
            throw EstimateError(spec_.name + ": malformed input extractor " + in.name);
    data_.estimate_name = spec_.name;
}

std::size_t ValueEstimate::input_dim() const {
    std::size_t dim = 1;
    for (const auto& in : spec_.inputs) dim += in.dim;
    return dim;
}

double ValueEstimate::scale_t(std::int64_t t) const {
    if (spec_.max_t == spec_.min_t) return 0.0;
    return static_cast<double>(t - spec_.min_t) / static_cast<double>(spec_.max_t - spec_.min_t);
}

std::vector<double> ValueEstimate::build_input(const EstimateContext& ctx, std::int64_t t) const {
    std::vector<double> row;
    row.reserve(input_dim());
    row.push_back(scale_t(t));
    for (const auto& in : spec_.inputs) {
        std::size_t before = row.size();
        in.append(ctx, row);
        if (row.size() - before != in.dim)
            throw EstimateError(spec_.name + ": extractor " + in.name + " appended " +
                                std::to_string(row.size() - before) + " values, declared " +
                                std::to_string(in.dim));
    }
    return row;
}

void ValueEstimate::collect_step(const std::vector<Observation>& contexts, core::TimeMin now) {
    for (const auto& obs : contexts) {
        if (spec_.guard && !spec_.guard(obs.ctx)) continue;

        if (!spec_.relevance || spec_.relevance(obs.ctx)) {
            std::vector<double> features;
            features.reserve(input_dim() - 1);
            for (const auto& in : spec_.inputs) {
                std::size_t before = features.size();
                in.append(obs.ctx, features);
                if (features.size() - before != in.dim)
                    throw EstimateError(spec_.name + ": extractor " + in.name +
                                        " appended a wrong width");
            }
            auto key = std::make_pair(obs.id, now);
            if (buffer_.emplace(std::move(key), std::move(features)).second) {
                buffer_times_[now].push_back(obs.id);
                ++diag_.snapshots;
            }
        }

        if (buffer_.empty()) continue;  // nothing can link, skip the label read

        double label = 0.0;
        bool readable = true;
        try {
            label = spec_.output_of(obs.ctx);
        } catch (...) {
            ++diag_.unreadable_outputs;
            readable = false;
        }
        if (!readable) continue;

        std::vector<double> row;
        for (std::int64_t t = spec_.min_t; t <= spec_.max_t; ++t) {
            auto it = buffer_.find(std::make_pair(obs.id, now - t));
            if (it == buffer_.end()) continue;
            row.clear();
            row.reserve(input_dim());
            row.push_back(scale_t(t));
            row.insert(row.end(), it->second.begin(), it->second.end());
            data_.append(t, row, label);
            ++diag_.examples;
        }
    }

    // inputs older than max_t ticks can never be linked again
    while (!buffer_times_.empty() && buffer_times_.begin()->first <= now - spec_.max_t) {
        for (const auto& id : buffer_times_.begin()->second)
            buffer_.erase(std::make_pair(id, buffer_times_.begin()->first));
        buffer_times_.erase(buffer_times_.begin());
    }
}

void ValueEstimate::train(const TrainConfig& cfg, bool full_retrain) {
    if (data_.empty()) throw EstimateError(spec_.name + ": training on an empty dataset");
    if (!model_ || full_retrain) {
        std::vector<bool> mask;
        mask.push_back(false);  // encoded horizon stays raw
        for (const auto& in : spec_.inputs)
            for (std::size_t d = 0; d < in.dim; ++d) mask.push_back(in.standardize);
        model_.emplace(spec_.output, input_dim(), spec_.classes, std::move(mask), spec_.hidden,
                       core::derive_seed(cfg.seed, train_generation_));
    }
    model_->fit(data_, cfg);
    ++train_generation_;
}

const Estimator& ValueEstimate::model() const {
    if (!model_) throw EstimateError(spec_.name + ": model not trained");
    return *model_;
}

void ValueEstimate::set_model(Estimator m) {
    if (m.in_dim() != input_dim())
        throw EstimateError(spec_.name + ": checkpoint width " + std::to_string(m.in_dim()) +
                            ", estimate needs " + std::to_string(input_dim()));
    model_ = std::move(m);
}

std::vector<double> ValueEstimate::predict_at(const EstimateContext& ctx,
                                              core::TimeMin target_time, core::TimeMin now) {
    if (!model_) throw EstimateError(spec_.name + ": prediction before training");
    if (target_time <= now)
        throw EstimateError(spec_.name + ": target time must lie in the future");
    std::int64_t t = target_time - now;
    if (t < spec_.min_t || t > spec_.max_t) {
        t = std::clamp(t, spec_.min_t, spec_.max_t);
        ++diag_.clamped_queries;
    }
    return model_->predict(build_input(ctx, t));
}

void ValueEstimate::reset_buffer() {
    buffer_.clear();
    buffer_times_.clear();
}

}  // namespace enkit::ml
