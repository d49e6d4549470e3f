#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "enkit/factory/scenario.hpp"
#include "enkit/ml/estimator.hpp"

namespace enkit::harness {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One multi-week experiment: scenario knobs plus the week-by-week policy
// schedule, training hyperparameters, and artifact switches. A single seed
// drives the scenario and every training event.
struct ExperimentConfig {
    factory::ScenarioConfig scenario;

    std::size_t weeks = 3;
    // Week w (1-based) runs schedule[min(w-1, last)]; the default reproduces
    // the observe-then-learn protocol: rigid first, learned afterwards.
    std::vector<factory::Policy> policy_schedule = {factory::Policy::Rigid, factory::Policy::Ml};

    ml::TrainConfig training{/*epochs=*/8, /*batch=*/256, /*learning_rate=*/0.05, /*seed=*/0};
    bool full_retrain = false;  // reinitialize instead of continuing at each training

    std::string out_dir = "out";
    bool dump_dataset = false;  // dataset.csv grows large at full scale; off unless asked
    bool verbose = false;       // per-tick ensemble trace into trace.txt
};

inline factory::Policy policy_for_week(const ExperimentConfig& cfg, std::size_t week) {
    const auto& s = cfg.policy_schedule;
    return s[std::min(week - 1, s.size() - 1)];
}

// One `key = value` assignment; unknown keys and malformed values throw.
// Shared by the file parser and command-line overrides.
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Flat key-value text: `key = value` lines, `#` comments, blank lines.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// Every key in schema order; parse_config_text(render_config(c)) == c.
std::string render_config(const ExperimentConfig& cfg);

// All recognized keys, for diagnostics and documentation.
const std::vector<std::string>& config_keys();

}  // namespace enkit::harness
