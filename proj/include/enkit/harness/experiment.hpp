#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>

#include "enkit/factory/sim.hpp"
#include "enkit/harness/config.hpp"

namespace enkit::harness {

// --- decision boundary ------------------------------------------------------

// Predicted arrival probability over the full (day of week, minutes before
// start) grid, with the cancellation cutoff per day kind: the largest offset
// at which the mean probability of that kind's days is still below one half
// (the learned rule cancels exactly while the probability sits below 0.5,
// so this is the latest minute a cancellation can happen; 0 = never).
struct BoundaryDump {
    std::array<std::array<double, 30>, 7> probability{};  // [day][offset-1], day 0 = Monday
    int business_cutoff = 0;                               // days 0-4
    int weekend_cutoff = 0;                                // days 5-6
};

BoundaryDump dump_boundary(const std::function<double(int dow, int offset)>& prob);

// Grid through the live estimate's own input pipeline; throws if untrained.
BoundaryDump dump_boundary(ml::ValueEstimate& estimate);

// Arrival probability from a bare checkpointed network, rebuilding the
// [encoded horizon, day one-hot] input layout of the willArrive estimate.
double will_arrive_probability(const ml::Estimator& model, int dow, int offset);

void write_boundary_csv(const BoundaryDump& dump, std::ostream& out);
BoundaryDump read_boundary_csv(std::istream& in);

// --- metrics ----------------------------------------------------------------

inline constexpr const char* kMetricsHeader =
    "week,day,day_of_week,shift_id,policy,standbys_called,canceled,lateness";

struct MetricsRow {
    std::size_t week = 1;  // 1-based
    std::int64_t day = 0;  // absolute day, 0-based from experiment start
    int day_of_week = 0;   // 0 = Monday
    std::string shift_id;
    std::string policy;
    std::int64_t standbys_called = 0;
    std::int64_t canceled = 0;
    std::int64_t lateness = 0;
    bool operator==(const MetricsRow&) const = default;
};

void write_metrics_csv(const std::vector<MetricsRow>& rows, std::ostream& out);
std::vector<MetricsRow> read_metrics_csv(std::istream& in);

// --- experiment -------------------------------------------------------------

struct ExperimentResult {
    std::vector<MetricsRow> rows;
    std::optional<BoundaryDump> boundary;  // present once the model was trained
    std::size_t trainings = 0;
    std::size_t infeasible_ticks = 0;  // aggregated over all days
    std::size_t ml_fallback_ticks = 0;
    bool access_violation = false;
    bool duplicate_standby = false;
    std::vector<std::string> artifacts;  // paths written, in emission order
};

// Runs the configured weeks in order, training the arrival estimate after
// every week but the last, and writes metrics.csv, per-training estimator
// checkpoints, boundary.csv (once trained), dataset.csv (behind the flag),
// and trace.txt (verbose) into out_dir. Deterministic per config.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace enkit::harness
