#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "enkit/core/resolver.hpp"
#include "enkit/factory/scenario.hpp"
#include "enkit/ml/estimate.hpp"

namespace enkit::factory {

// Per-day lookup structures the ensemble predicates read. Rebuilt each day;
// the predicates hold a pointer to this holder, which must outlive them.
struct DayContextIndex {
    struct ShiftSets {
        std::unordered_set<std::string> assigned;
        std::unordered_set<std::string> standbys;
        std::unordered_set<std::string> called;  // grows as standbys are called in
        core::TimeMin start = 0;
        core::TimeMin end = 0;
    };
    std::unordered_map<std::string, ShiftSets> shifts;  // by shift component id
};

// The learned cancellation test: an absent worker is late when the trained
// estimate puts their on-time arrival below even odds. Falls back to the
// rigid threshold whenever the estimate cannot answer (untrained, or the
// start is no longer in the future); fallback ticks are counted.
class LatePredicate {
public:
    LatePredicate(const ScenarioConfig* cfg, ml::ValueEstimate* estimate)
        : cfg_(cfg), est_(estimate) {}

    void begin_day();
    bool late_given_absent(core::TimeMin now, core::TimeMin start, core::TimeMin end);

    std::size_t fallback_ticks() const { return fallbacks_; }

private:
    const ScenarioConfig* cfg_;
    ml::ValueEstimate* est_;
    std::map<std::pair<core::TimeMin, core::TimeMin>, bool> cache_;  // (now, start) -> verdict
    std::size_t fallbacks_ = 0;
};

// The four scenario ensembles. All take the shift as their static role; the
// cancellation type carries the standby replacement as an inner type.
core::EnsembleType access_to_factory(const DayContextIndex* idx);
core::EnsembleType access_to_dispenser(const DayContextIndex* idx);
core::EnsembleType access_to_workplace(const DayContextIndex* idx);
core::EnsembleType cancel_late_workers(const DayContextIndex* idx, const ScenarioConfig* cfg,
                                       Policy policy, LatePredicate* late);

// The willArrive estimate: predicts a worker's isAtFactory 1..30 minutes
// ahead from the day of the week, guarded to (worker, own shift) pairs and
// recording inputs only for workers whose arrival is still undecided.
ml::EstimateSpec will_arrive_spec(const DayContextIndex* idx);

}  // namespace enkit::factory
