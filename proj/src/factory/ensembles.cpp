#include "enkit/factory/ensembles.hpp"

#include "enkit/factory/world.hpp"

namespace enkit::factory {

namespace {

core::SituationFn window_situation(int lead, int trail) {
    return [lead, trail](const core::EvalContext& ctx) {
        const auto& shift = ctx.bound("shift");
        return shift.time("startTime") - lead <= ctx.now &&
               ctx.now <= shift.time("endTime") + trail;
    };
}

// Membership shared by the three access ensembles: non-canceled assigned
// workers plus every called-in standby.
core::MembershipFn access_membership(const DayContextIndex* idx) {
    return [idx](const core::EvalContext& ctx, const core::ComponentInstance& cand) {
        const auto& sets = idx->shifts.at(ctx.roles.single("shift"));
        if (sets.called.count(cand.id)) return true;
        return sets.assigned.count(cand.id) != 0 && !cand.boolean("canceled");
    };
}

core::EnsembleType access_ensemble(const std::string& name, const DayContextIndex* idx,
                                   core::ResourceFn resource, std::string operation) {
    core::EnsembleType type;
    type.name = name;
    type.static_roles.push_back({"shift", "Shift", 1, 1});
    type.situation = window_situation(30, 30);
    type.dynamic_roles.push_back({"workers", "Worker", core::CardinalityStar{},
                                  access_membership(idx), {}, false, {}});
    type.actions.push_back(core::AllowSpec{"workers", std::move(resource), std::move(operation)});
    return type;
}

}  // namespace

void LatePredicate::begin_day() {
    cache_.clear();
    fallbacks_ = 0;
}

bool LatePredicate::late_given_absent(core::TimeMin now, core::TimeMin start, core::TimeMin end) {
    auto key = std::make_pair(now, start);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    bool verdict;
    if (now >= start || !est_->trained()) {
        ++fallbacks_;
        verdict = start - now <= cfg_->rigid_cutoff && now <= end;
    } else {
        ml::EstimateContext probe{nullptr, nullptr, nullptr, now};
        verdict = est_->predict_at(probe, start, now)[0] < 0.5;
    }
    cache_.emplace(key, verdict);
    return verdict;
}

core::EnsembleType access_to_factory(const DayContextIndex* idx) {
    return access_ensemble("AccessToFactory", idx,
                           [](const core::EvalContext&) { return kGateResource; }, "enter");
}

core::EnsembleType access_to_dispenser(const DayContextIndex* idx) {
    return access_ensemble("AccessToDispenser", idx,
                           [](const core::EvalContext&) { return kDispenserResource; }, "use");
}

core::EnsembleType access_to_workplace(const DayContextIndex* idx) {
    return access_ensemble(
        "AccessToWorkplace", idx,
        [](const core::EvalContext& ctx) { return ctx.bound("shift").identifier("workPlace"); },
        "enter");
}

core::EnsembleType cancel_late_workers(const DayContextIndex* idx, const ScenarioConfig* cfg,
                                       Policy policy, LatePredicate* late) {
    core::EnsembleType type;
    type.name = "CancelLateWorkers";
    type.static_roles.push_back({"shift", "Shift", 1, 1});

    core::MembershipFn membership;
    if (policy == Policy::Rigid) {
        type.situation = window_situation(cfg->rigid_cutoff, 0);
        membership = [idx](const core::EvalContext& ctx, const core::ComponentInstance& cand) {
            const auto& sets = idx->shifts.at(ctx.roles.single("shift"));
            return sets.assigned.count(cand.id) != 0 && !cand.boolean("isAtFactory");
        };
    } else {
        type.situation = window_situation(30, 30);
        membership = [idx, late](const core::EvalContext& ctx,
                                 const core::ComponentInstance& cand) {
            const auto& sets = idx->shifts.at(ctx.roles.single("shift"));
            if (!sets.assigned.count(cand.id) || cand.boolean("isAtFactory")) return false;
            return late->late_given_absent(ctx.now, sets.start, sets.end);
        };
    }
    type.dynamic_roles.push_back({"lateWorkers", "Worker", core::CardinalityStar{},
                                  std::move(membership), {}, false,
                                  policy == Policy::Ml ? std::vector<std::string>{"willArrive"}
                                                       : std::vector<std::string>{}});
    type.actions.push_back(core::NotifySpec{"lateWorkers", "canceled"});

    core::EnsembleType replace;
    replace.name = "ReplaceLateWithStandbys";
    replace.dynamic_roles.push_back(
        {"standBys", "Worker", core::CardinalitySizeOf{"lateWorkers"}, {},
         [idx](const core::EvalContext& ctx, const core::ComponentInstance& cand) {
             return idx->shifts.at(ctx.roles.single("shift")).standbys.count(cand.id) != 0;
         },
         true,
         {}});
    replace.actions.push_back(core::NotifySpec{"standBys", "calledIn"});
    type.inner.push_back(std::move(replace));

    return type;
}

ml::EstimateSpec will_arrive_spec(const DayContextIndex* idx) {
    ml::EstimateSpec spec;
    spec.name = "willArrive";
    spec.attachment = ml::Attachment::ComponentEnsemblePair;
    spec.output = ml::OutputKind::Binary;
    spec.min_t = 1;
    spec.max_t = 30;
    spec.inputs.push_back(
        {"dayOfWeek", 7, false, [](const ml::EstimateContext& ctx, std::vector<double>& out) {
             int dow = day_of_week(ctx.now / 1440);
             for (int d = 0; d < 7; ++d) out.push_back(d == dow ? 1.0 : 0.0);
         }});
    spec.output_of = [](const ml::EstimateContext& ctx) {
        return ctx.component->boolean("isAtFactory") ? 1.0 : 0.0;
    };
    spec.guard = [idx](const ml::EstimateContext& ctx) {
        const auto& shift_id = ctx.ensemble->at("shift").front();
        return idx->shifts.at(shift_id).assigned.count(ctx.component->id) != 0;
    };
    spec.relevance = [](const ml::EstimateContext& ctx) {
        return !ctx.component->boolean("isAtFactory") && !ctx.component->boolean("canceled");
    };
    return spec;
}

}  // namespace enkit::factory
