#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "enkit/factory/ensembles.hpp"
#include "enkit/factory/world.hpp"

namespace enkit::factory {

struct ShiftMetrics {
    std::int64_t standbys_called = 0;
    std::int64_t canceled = 0;
    std::int64_t lateness = 0;  // sum of squared minutes past start, workplace arrivals only
};

struct DayResult {
    std::vector<ShiftMetrics> shifts;
    std::size_t ml_fallback_ticks = 0;   // learned policy answered by the rigid rule
    std::size_t infeasible_ticks = 0;    // replacement demand not fully met
    bool access_violation = false;       // audit: entered without a same-tick grant
    bool duplicate_standby = false;      // audit: one standby serving two shifts
};

// One scenario run: owns the willArrive estimate (so training carries across
// days and weeks) while each day gets a fresh population and resolver. The
// whole object is deterministic in (config, call sequence).
class FactorySim {
public:
    explicit FactorySim(ScenarioConfig cfg);

    DayResult run_day(std::int64_t day, Policy policy);

    ml::ValueEstimate& will_arrive() { return will_arrive_; }
    const ml::ValueEstimate& will_arrive() const { return will_arrive_; }
    const ScenarioConfig& config() const { return cfg_; }

    // Test hook, called after each tick's resolution with the step result.
    std::function<void(core::TimeMin, const core::StepResult&)> tick_probe;

    // Forwarded to the resolver: one line per live ensemble instance per tick.
    std::function<void(const std::string&)> debug_sink;

private:
    ScenarioConfig cfg_;
    DayContextIndex index_;
    ml::ValueEstimate will_arrive_;
    LatePredicate late_;
};

}  // namespace enkit::factory
