#include <cstdio>
#include <unordered_map>

#include "enkit/factory/sim.hpp"

namespace enkit::factory {

namespace {

std::string padded(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03zu", i);
    return buf;
}

void write_worker_fields(core::ComponentInstance& c, const WorkerSim& w) {
    c.fields.at("position") = core::Value::identifier(waypoint_of(w.phase));
    c.fields.at("isAtFactory") = core::Value::boolean(inside_factory(w.phase));
    c.fields.at("hasHeadgear") =
        core::Value::boolean(w.phase == Phase::HasHeadgear || w.phase == Phase::AtWorkplace);
    c.fields.at("isAtWorkplace") = core::Value::boolean(w.phase == Phase::AtWorkplace);
    c.fields.at("canceled") = core::Value::boolean(w.phase == Phase::Canceled);
}

}  // namespace

FactorySim::FactorySim(ScenarioConfig cfg)
    : cfg_(cfg), will_arrive_(will_arrive_spec(&index_)), late_(&cfg_, &will_arrive_) {}

DayResult FactorySim::run_day(std::int64_t day, Policy policy) {
    const std::size_t S = cfg_.shifts_count;
    const core::TimeMin start = shift_start(cfg_, day);
    const core::TimeMin end = shift_end(cfg_, day);

    DayResult out;
    out.shifts.resize(S);

    ArrivalPlan plan = schedule_arrivals(cfg_, day);

    core::TypeRegistry registry;
    registry.register_component_type(worker_component_type());
    registry.register_component_type(shift_component_type());
    core::Population pop(registry);

    index_.shifts.clear();
    std::vector<WorkerSim> sims;
    std::unordered_map<std::string, std::size_t> sim_index;
    std::vector<std::string> shift_ids(S);
    std::unordered_map<std::string, std::size_t> shift_num;
    std::vector<core::ComponentId> workplace_res(S);
    std::vector<core::IdList> assigned_ids(S), standby_ids(S);

    auto add_worker = [&](const std::string& id, std::size_t s, bool standby,
                          core::TimeMin gate_arrival, Phase phase) {
        pop.add({id,
                 "Worker",
                 {{"position", core::Value::identifier(waypoint_of(phase))},
                  {"isAtFactory", core::Value::boolean(false)},
                  {"hasHeadgear", core::Value::boolean(false)},
                  {"isAtWorkplace", core::Value::boolean(false)},
                  {"canceled", core::Value::boolean(false)}}});
        sim_index[id] = sims.size();
        sims.push_back({id, s, standby, phase, gate_arrival, 0, std::nullopt, false});
    };

    for (std::size_t s = 0; s < S; ++s) {
        shift_ids[s] = "shift-" + std::to_string(s + 1);
        shift_num[shift_ids[s]] = s;
        workplace_res[s] = "workplace-" + std::to_string(s + 1);
        for (std::size_t i = 0; i < cfg_.workers_per_shift; ++i) {
            std::string id = "w-" + std::to_string(s + 1) + "-" + padded(i);
            assigned_ids[s].push_back(id);
            add_worker(id, s, false, plan.arrival[s][i], Phase::AtHome);
        }
        for (std::size_t i = 0; i < cfg_.standbys_per_shift; ++i) {
            std::string id = "s-" + std::to_string(s + 1) + "-" + padded(i);
            standby_ids[s].push_back(id);
            add_worker(id, s, true, 0, Phase::StandbyIdle);
        }
    }

    if (cfg_.global_standbys) {
        core::IdList all;
        for (const auto& pool : standby_ids) all.insert(all.end(), pool.begin(), pool.end());
        for (auto& pool : standby_ids) pool = all;
    }

    for (std::size_t s = 0; s < S; ++s) {
        auto& sets = index_.shifts[shift_ids[s]];
        sets.start = start;
        sets.end = end;
        sets.assigned.insert(assigned_ids[s].begin(), assigned_ids[s].end());
        sets.standbys.insert(standby_ids[s].begin(), standby_ids[s].end());
        pop.add({shift_ids[s],
                 "Shift",
                 {{"workPlace", core::Value::identifier(workplace_res[s])},
                  {"startTime", core::Value::time(start)},
                  {"endTime", core::Value::time(end)},
                  {"assigned", core::Value::id_list(assigned_ids[s])},
                  {"workers", core::Value::id_list(assigned_ids[s])},
                  {"standBys", core::Value::id_list(standby_ids[s])},
                  {"calledStandbys", core::Value::id_list({})},
                  {"cancelled", core::Value::id_list({})}}});
    }

    // population is complete: node handles are stable from here on
    std::vector<core::ComponentInstance*> comp_of(sims.size());
    for (auto& [id, idx] : sim_index) comp_of[idx] = &pop.at(id);

    core::Resolver resolver(registry);
    resolver.debug_sink = debug_sink;
    resolver.register_ensemble_type(access_to_factory(&index_));
    resolver.register_ensemble_type(access_to_dispenser(&index_));
    resolver.register_ensemble_type(access_to_workplace(&index_));
    resolver.register_ensemble_type(cancel_late_workers(&index_, &cfg_, policy, &late_));

    late_.begin_day();
    will_arrive_.reset_buffer();

    std::vector<std::vector<std::string>> called_order(S), cancelled_order(S);
    std::unordered_map<std::string, std::size_t> called_by;
    std::vector<bool> shift_dirty(S, false);
    std::vector<core::RoleBinding> pair_binding(S);
    std::vector<std::vector<std::string>> pair_ids(S);
    for (std::size_t s = 0; s < S; ++s) {
        pair_binding[s] = {{"shift", {shift_ids[s]}}};
        for (const auto& id : assigned_ids[s]) pair_ids[s].push_back(shift_ids[s] + "#" + id);
    }

    std::vector<ml::ValueEstimate::Observation> obs;
    obs.reserve(S * cfg_.workers_per_shift);

    for (core::TimeMin now = start - cfg_.day_margin; now <= end + cfg_.day_margin; ++now) {
        for (auto& w : sims)
            if (w.dirty) {
                write_worker_fields(*comp_of[sim_index.at(w.id)], w);
                w.dirty = false;
            }
        for (std::size_t s = 0; s < S; ++s)
            if (shift_dirty[s]) {
                core::IdList working;
                for (const auto& id : assigned_ids[s])
                    if (sims[sim_index.at(id)].phase != Phase::Canceled) working.push_back(id);
                working.insert(working.end(), called_order[s].begin(), called_order[s].end());
                auto& rec = pop.at(shift_ids[s]);
                rec.fields.at("workers") = core::Value::id_list(std::move(working));
                rec.fields.at("calledStandbys") =
                    core::Value::id_list({called_order[s].begin(), called_order[s].end()});
                rec.fields.at("cancelled") =
                    core::Value::id_list({cancelled_order[s].begin(), cancelled_order[s].end()});
                shift_dirty[s] = false;
            }

        core::StepResult res = resolver.resolve(pop, now);

        std::unordered_map<const core::EnsembleInstance*, std::size_t> replaced;
        for (const auto& inst : res.instances)
            if (inst.type->name == "ReplaceLateWithStandbys")
                replaced[inst.parent] = inst.dynamics.at("standBys").size();
        for (const auto& inst : res.instances)
            if (inst.type->name == "CancelLateWorkers") {
                std::size_t demand = inst.dynamics.at("lateWorkers").size();
                auto it = replaced.find(&inst);
                if (demand > (it == replaced.end() ? 0 : it->second)) {
                    ++out.infeasible_ticks;
                    break;
                }
            }

        if (!res.notifications.empty()) {
            std::unordered_map<std::string, const core::EnsembleInstance*> by_identity;
            for (const auto& inst : res.instances) by_identity[inst.identity] = &inst;
            for (const auto& n : res.notifications) {
                const core::EnsembleInstance* top = by_identity.at(n.ensemble_identity);
                while (top->parent) top = top->parent;
                std::size_t s = shift_num.at(top->statics.at("shift").front());
                WorkerSim& w = sims[sim_index.at(n.component)];
                if (n.tag == "canceled") {
                    if (w.phase == Phase::AtHome || w.phase == Phase::Traveling) {
                        apply_canceled(w);
                        cancelled_order[w.shift].push_back(w.id);
                        shift_dirty[w.shift] = true;
                    }
                } else if (n.tag == "calledIn") {
                    if (w.phase == Phase::StandbyIdle) {
                        apply_called_in(w, now, cfg_);
                        index_.shifts.at(shift_ids[s]).called.insert(w.id);
                        called_order[s].push_back(w.id);
                        called_by[w.id] = s;
                        shift_dirty[s] = true;
                    } else if (auto it = called_by.find(w.id);
                               it != called_by.end() && it->second != s) {
                        out.duplicate_standby = true;
                    }
                }
            }
        }

        if (now >= start - cfg_.collection_lead && now <= end + 30) {
            obs.clear();
            for (std::size_t s = 0; s < S; ++s)
                for (std::size_t i = 0; i < cfg_.workers_per_shift; ++i) {
                    std::size_t idx = sim_index.at(assigned_ids[s][i]);
                    obs.push_back({pair_ids[s][i],
                                   ml::EstimateContext{&pop, comp_of[idx], &pair_binding[s], now}});
                }
            will_arrive_.collect_step(obs, now);
        }

        for (auto& w : sims) {
            bool was_inside = inside_factory(w.phase);
            step_worker(w, res.permissions, now, cfg_, workplace_res[w.shift]);
            if (!was_inside && inside_factory(w.phase) &&
                !res.permissions.allows(w.id, kGateResource, "enter"))
                out.access_violation = true;
        }

        if (tick_probe) tick_probe(now, res);
    }

    for (const auto& w : sims) {
        if (!w.workplace_arrival) continue;
        std::int64_t past = *w.workplace_arrival - start;
        if (past <= 0) continue;
        std::size_t s = w.standby ? called_by.at(w.id) : w.shift;
        out.shifts[s].lateness += past * past;
    }
    for (std::size_t s = 0; s < S; ++s) {
        out.shifts[s].standbys_called = static_cast<std::int64_t>(called_order[s].size());
        out.shifts[s].canceled = static_cast<std::int64_t>(cancelled_order[s].size());
    }
    out.ml_fallback_ticks = late_.fallback_ticks();
    return out;
}

}  // namespace enkit::factory
