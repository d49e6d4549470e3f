#pragma once

#include <optional>
#include <string>
#include <vector>

#include "enkit/core/resolver.hpp"
#include "enkit/factory/scenario.hpp"

namespace enkit::factory {

// Resources guarded by the access ensembles. Workplaces are per shift and
// named by the shift record's workPlace field.
inline const core::ComponentId kGateResource = "factory:gate";
inline const core::ComponentId kDispenserResource = "factory:dispenser";

// --- arrival schedule -----------------------------------------------------

// Gate arrival times for one day, indexed [shift][worker]. A worker's
// arrival is bus offset + rounded exponential delay; exactly
// floor(late_fraction * workers) per shift ride the late bus.
struct ArrivalPlan {
    std::vector<std::vector<core::TimeMin>> arrival;
    std::vector<std::vector<bool>> late;
};

ArrivalPlan schedule_arrivals(const ScenarioConfig& cfg, std::int64_t day);

// --- worker state machine ---------------------------------------------------

enum class Phase {
    AtHome,
    Traveling,  // at the gate, waiting to be let in
    AtFactory,
    HasHeadgear,
    AtWorkplace,
    Canceled,  // absorbing for the day
    StandbyIdle,
    StandbyTraveling,
};

struct WorkerSim {
    core::ComponentId id;
    std::size_t shift = 0;
    bool standby = false;
    Phase phase = Phase::AtHome;
    core::TimeMin gate_arrival = 0;  // bus schedule; for standbys set when called in
    core::TimeMin leg_done = 0;      // current walking leg completes at this minute
    std::optional<core::TimeMin> workplace_arrival;
    bool dirty = true;  // observable fields need rewriting
};

inline bool inside_factory(Phase p) {
    return p == Phase::AtFactory || p == Phase::HasHeadgear || p == Phase::AtWorkplace;
}

// One minute of movement. Every door is gated by a permission from the
// current resolution; the workplace additionally requires the headgear leg
// to have happened.
void step_worker(WorkerSim& w, const core::PermissionSet& perms, core::TimeMin now,
                 const ScenarioConfig& cfg, const core::ComponentId& workplace_resource);

// Notification reactions. Cancellation only lands on a worker not yet
// inside; a call-in only moves an idle standby.
void apply_canceled(WorkerSim& w);
void apply_called_in(WorkerSim& w, core::TimeMin now, const ScenarioConfig& cfg);

const char* waypoint_of(Phase p);

// --- component schemas ------------------------------------------------------

core::ComponentType worker_component_type();  // beyond control: observed, never written by ensembles
core::ComponentType shift_component_type();

}  // namespace enkit::factory
