#include "enkit/factory/world.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "enkit/core/rng.hpp"

namespace enkit::factory {

ArrivalPlan schedule_arrivals(const ScenarioConfig& cfg, std::int64_t day) {
    ArrivalPlan plan;
    plan.arrival.resize(cfg.shifts_count);
    plan.late.resize(cfg.shifts_count);
    core::TimeMin start = shift_start(cfg, day);

    for (std::size_t s = 0; s < cfg.shifts_count; ++s) {
        // one derived stream per (day, shift): the late picks and the delays
        // of one shift never perturb another's
        std::mt19937_64 rng(core::derive_seed(
            cfg.seed, static_cast<std::uint64_t>(day) * 131 + s, 0xa221));

        std::size_t n = cfg.workers_per_shift;
        std::size_t late_count =
            static_cast<std::size_t>(cfg.late_fraction * static_cast<double>(n));
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        core::seeded_shuffle(order, rng);

        auto& late = plan.late[s];
        late.assign(n, false);
        for (std::size_t i = 0; i < late_count && i < n; ++i) late[order[i]] = true;

        auto& arrival = plan.arrival[s];
        arrival.resize(n);
        for (std::size_t w = 0; w < n; ++w) {
            double delay = core::exponential(rng, cfg.delay_mean);
            arrival[w] = start + bus_offset(cfg, day, late[w]) +
                         static_cast<core::TimeMin>(std::llround(delay));
        }
    }
    return plan;
}

void step_worker(WorkerSim& w, const core::PermissionSet& perms, core::TimeMin now,
                 const ScenarioConfig& cfg, const core::ComponentId& workplace_resource) {
    Phase before = w.phase;

    if ((w.phase == Phase::AtHome || w.phase == Phase::StandbyTraveling) && now >= w.gate_arrival)
        w.phase = Phase::Traveling;
    if (w.phase == Phase::Traveling && perms.allows(w.id, kGateResource, "enter")) {
        w.phase = Phase::AtFactory;
        w.leg_done = now + cfg.gate_to_dispenser;
    }
    if (w.phase == Phase::AtFactory && now >= w.leg_done &&
        perms.allows(w.id, kDispenserResource, "use")) {
        w.phase = Phase::HasHeadgear;
        w.leg_done = now + cfg.dispenser_to_workplace;
    }
    if (w.phase == Phase::HasHeadgear && now >= w.leg_done &&
        perms.allows(w.id, workplace_resource, "enter")) {
        w.phase = Phase::AtWorkplace;
        w.workplace_arrival = now;
    }

    if (w.phase != before) w.dirty = true;
}

void apply_canceled(WorkerSim& w) {
    if (w.phase == Phase::AtHome || w.phase == Phase::Traveling) {
        w.phase = Phase::Canceled;
        w.dirty = true;
    }
}

void apply_called_in(WorkerSim& w, core::TimeMin now, const ScenarioConfig& cfg) {
    if (w.phase == Phase::StandbyIdle) {
        w.phase = Phase::StandbyTraveling;
        w.gate_arrival = now + cfg.standby_travel_time;
        w.dirty = true;
    }
}

const char* waypoint_of(Phase p) {
    switch (p) {
        case Phase::AtHome:
        case Phase::Canceled:
        case Phase::StandbyIdle: return "home";
        case Phase::StandbyTraveling: return "enroute";
        case Phase::Traveling: return "gate";
        case Phase::AtFactory: return "factory";
        case Phase::HasHeadgear: return "dispenser";
        case Phase::AtWorkplace: return "workplace";
    }
    return "?";
}

core::ComponentType worker_component_type() {
    return core::ComponentType{
        "Worker",
        {{"position", core::ValueKind::Identifier},
         {"isAtFactory", core::ValueKind::Boolean},
         {"hasHeadgear", core::ValueKind::Boolean},
         {"isAtWorkplace", core::ValueKind::Boolean},
         {"canceled", core::ValueKind::Boolean}},
        /*beyond_control=*/true};
}

core::ComponentType shift_component_type() {
    return core::ComponentType{
        "Shift",
        {{"workPlace", core::ValueKind::Identifier},
         {"startTime", core::ValueKind::Time},
         {"endTime", core::ValueKind::Time},
         {"assigned", core::ValueKind::IdList},
         {"workers", core::ValueKind::IdList},
         {"standBys", core::ValueKind::IdList},
         {"calledStandbys", core::ValueKind::IdList},
         {"cancelled", core::ValueKind::IdList}},
        /*beyond_control=*/false};
}

}  // namespace enkit::factory
