#include "enkit/core/resolver.hpp"

#include <algorithm>
#include <sstream>

#include "enkit/heur/selection.hpp"

namespace enkit::core {

namespace {

RoleBinding kEmptyBinding;

std::string binding_str(const RoleBinding& b) {
    std::string out;
    for (const auto& [role, ids] : b) {
        if (!out.empty()) out += ";";
        out += role + "=";
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (i) out += ",";
            out += ids[i];
        }
    }
    return out;
}

// All ascending-id subsets of `ids` with size in [lo, hi]; sizes ascending,
// combinations lexicographic within a size.
std::vector<IdList> subsets_in_range(const std::vector<ComponentId>& ids,
                                     std::size_t lo, std::size_t hi) {
    std::vector<IdList> out;
    hi = std::min(hi, ids.size());
    for (std::size_t size = lo; size <= hi; ++size) {
        std::vector<std::size_t> pick(size);
        for (std::size_t i = 0; i < size; ++i) pick[i] = i;
        while (true) {
            IdList subset;
            subset.reserve(size);
            for (std::size_t i : pick) subset.push_back(ids[i]);
            out.push_back(std::move(subset));
            // next combination
            std::size_t i = size;
            while (i > 0 && pick[i - 1] == ids.size() - size + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return out;
}

struct RoleScope {
    std::vector<std::string> names;
    bool contains(const std::string& n) const {
        return std::find(names.begin(), names.end(), n) != names.end();
    }
};

void validate_type(const EnsembleType& t, RoleScope scope, std::vector<std::string>& all_names,
                   const TypeRegistry& reg) {
    if (t.name.empty()) throw ModelError("ensemble type needs a name");
    if (std::find(all_names.begin(), all_names.end(), t.name) != all_names.end())
        throw ModelError("duplicate ensemble type name: " + t.name);
    all_names.push_back(t.name);

    std::vector<std::string> local;
    auto declare = [&](const std::string& role) {
        if (role.empty()) throw ModelError(t.name + ": role needs a name");
        if (std::find(local.begin(), local.end(), role) != local.end())
            throw ModelError(t.name + ": duplicate role name " + role);
        local.push_back(role);
        scope.names.push_back(role);
    };

    for (const auto& r : t.static_roles) {
        declare(r.name);
        if (!reg.has(r.component_type))
            throw ModelError(t.name + "." + r.name + ": unknown component type " + r.component_type);
        if (r.lo < 1 || r.lo > r.hi)
            throw ModelError(t.name + "." + r.name + ": bad static cardinality");
    }
    bool saw_selector = false;
    for (const auto& r : t.dynamic_roles) {
        if (saw_selector)
            throw ModelError(t.name + ": selector role must be the last dynamic role");
        if (!reg.has(r.component_type))
            throw ModelError(t.name + "." + r.name + ": unknown component type " + r.component_type);
        if (r.use_selector) {
            saw_selector = true;
            if (!r.selector_pool)
                throw ModelError(t.name + "." + r.name + ": selector role needs an eligibility filter");
            if (r.membership)
                throw ModelError(t.name + "." + r.name + ": role is either condition- or selector-based");
            bool exact = std::holds_alternative<CardinalitySizeOf>(r.cardinality);
            if (const auto* iv = std::get_if<CardinalityInterval>(&r.cardinality))
                exact = iv->lo == iv->hi;
            if (!exact)
                throw ModelError(t.name + "." + r.name + ": selector role needs an exact-size cardinality");
        } else if (!r.membership) {
            throw ModelError(t.name + "." + r.name + ": condition role needs a membership predicate");
        }
        if (const auto* so = std::get_if<CardinalitySizeOf>(&r.cardinality))
            if (!scope.contains(so->role))
                throw ModelError(t.name + "." + r.name + ": cardinality references unknown role " + so->role);
        declare(r.name);
    }
    for (const auto& a : t.actions) {
        const std::string& target = std::holds_alternative<AllowSpec>(a)
                                        ? std::get<AllowSpec>(a).target_role
                                        : std::get<NotifySpec>(a).target_role;
        if (!scope.contains(target))
            throw ModelError(t.name + ": action targets unknown role " + target);
    }
    for (const auto& in : t.inner) validate_type(in, scope, all_names, reg);
}

}  // namespace

const IdList* BindingView::find(const std::string& role) const {
    if (statics_) {
        auto it = statics_->find(role);
        if (it != statics_->end()) return &it->second;
    }
    if (dynamics_) {
        auto it = dynamics_->find(role);
        if (it != dynamics_->end()) return &it->second;
    }
    return parent_ ? parent_->find(role) : nullptr;
}

const IdList& BindingView::role(const std::string& role_name) const {
    const IdList* ids = find(role_name);
    if (!ids) throw ModelError("role not bound: " + role_name);
    return *ids;
}

const ComponentId& BindingView::single(const std::string& role_name) const {
    const IdList& ids = role(role_name);
    if (ids.size() != 1)
        throw ModelError("role " + role_name + " is not singleton (size " +
                         std::to_string(ids.size()) + ")");
    return ids.front();
}

std::optional<IdList> populate_dynamic_role(const DynamicRoleSpec& role,
                                            const Population& pop,
                                            const BindingView& bound_so_far,
                                            TimeMin now) {
    EvalContext ctx{pop, bound_so_far, now};
    const std::vector<ComponentId>& candidates = pop.ids_of_type(role.component_type);

    auto demand_of = [&]() -> std::size_t {
        if (const auto* so = std::get_if<CardinalitySizeOf>(&role.cardinality))
            return bound_so_far.role(so->role).size();
        return std::get<CardinalityInterval>(role.cardinality).lo;
    };

    if (role.use_selector) {
        heur::SelectionProblem problem;
        problem.instances.push_back({"self", demand_of()});
        for (const auto& id : candidates)
            if (role.selector_pool(ctx, pop.at(id)))
                problem.candidates.push_back({id, {"self"}, 0.0});
        auto assignment = heur::exclusive_select(problem);
        if (!assignment) return std::nullopt;
        return (*assignment)["self"];
    }

    IdList selected;
    for (const auto& id : candidates)
        if (role.membership(ctx, pop.at(id))) selected.push_back(id);

    if (std::holds_alternative<CardinalityStar>(role.cardinality)) return selected;
    if (const auto* iv = std::get_if<CardinalityInterval>(&role.cardinality)) {
        if (selected.size() < iv->lo || selected.size() > iv->hi) return std::nullopt;
        return selected;
    }
    const auto& so = std::get<CardinalitySizeOf>(role.cardinality);
    if (selected.size() != bound_so_far.role(so.role).size()) return std::nullopt;
    return selected;
}

void Resolver::register_ensemble_type(EnsembleType type) {
    std::vector<std::string> names;
    std::function<void(const EnsembleType&)> walk = [&](const EnsembleType& x) {
        names.push_back(x.name);
        for (const auto& in : x.inner) walk(in);
    };
    for (const auto& t : types_) walk(t);
    if (!registry_) throw ModelError("resolver has no component type registry");
    validate_type(type, RoleScope{}, names, *registry_);
    types_.push_back(std::move(type));
}

void Resolver::reset_episode() {
    delivered_.clear();
    first_seen_.clear();
    live_prev_.clear();
}

StepResult Resolver::resolve(const Population& pop, TimeMin now) {
    StepResult result;
    std::deque<BindingView> views;  // aligned with result.instances

    struct Pending {
        const EnsembleType* type;
        RoleBinding statics;
        RoleBinding dynamics;
        std::string identity;
        const EnsembleInstance* parent;
        const BindingView* parent_view;
        bool dead = false;
        // at most one selector request (selector role is the last dynamic role)
        bool has_request = false;
        std::size_t request_role = 0;
        std::size_t demand = 0;
        IdList eligible;
    };

    // Resolve condition roles of one candidate instance; queue a selector
    // request if its type has a selector role.
    auto resolve_roles = [&](Pending& pend) {
        BindingView view(&pend.statics, &pend.dynamics, pend.parent_view);
        EvalContext ctx{pop, view, now};
        if (pend.type->situation && !pend.type->situation(ctx)) {
            pend.dead = true;
            return;
        }
        const auto& roles = pend.type->dynamic_roles;
        for (std::size_t ri = 0; ri < roles.size(); ++ri) {
            const DynamicRoleSpec& role = roles[ri];
            if (role.use_selector) {
                std::size_t demand = 0;
                if (const auto* so = std::get_if<CardinalitySizeOf>(&role.cardinality))
                    demand = view.role(so->role).size();
                else
                    demand = std::get<CardinalityInterval>(role.cardinality).lo;
                IdList eligible;
                for (const auto& id : pop.ids_of_type(role.component_type))
                    if (role.selector_pool(ctx, pop.at(id))) eligible.push_back(id);
                pend.has_request = true;
                pend.request_role = ri;
                pend.demand = demand;
                pend.eligible = std::move(eligible);
                return;  // selector role is last by construction
            }
            auto selected = populate_dynamic_role(role, pop, view, now);
            if (!selected) {
                pend.dead = true;
                return;
            }
            pend.dynamics[role.name] = std::move(*selected);
        }
    };

    // Arbitrate all selector requests of one level, grouped per ensemble
    // type (the selector role is unique within a type). All-or-nothing per
    // group; on infeasibility the maximal feasible prefix in ascending-slack
    // order survives and the rest dissolve for this step.
    auto arbitrate = [&](std::vector<Pending*>& requests) {
        if (requests.empty()) return;
        auto build_problem = [&](const std::vector<Pending*>& subset) {
            heur::SelectionProblem problem;
            std::map<ComponentId, std::vector<std::string>> elig;
            for (const Pending* pend : subset) {
                problem.instances.push_back({pend->identity, pend->demand});
                for (const auto& id : pend->eligible) elig[id].push_back(pend->identity);
            }
            for (auto& [id, insts] : elig) problem.candidates.push_back({id, insts, 0.0});
            return problem;
        };
        auto apply = [&](const heur::Assignment& a, const std::vector<Pending*>& subset) {
            for (Pending* pend : subset) {
                const auto& role = pend->type->dynamic_roles[pend->request_role];
                pend->dynamics[role.name] = a.at(pend->identity);
            }
        };
        if (auto a = heur::exclusive_select(build_problem(requests))) {
            apply(*a, requests);
            return;
        }
        std::vector<Pending*> order = requests;
        std::stable_sort(order.begin(), order.end(), [](const Pending* a, const Pending* b) {
            auto slack = [](const Pending* p) {
                return static_cast<long long>(p->eligible.size()) - static_cast<long long>(p->demand);
            };
            return slack(a) < slack(b);
        });
        std::vector<Pending*> accepted;
        for (Pending* pend : order) {
            std::vector<Pending*> trial = accepted;
            trial.push_back(pend);
            if (heur::exclusive_select(build_problem(trial)))
                accepted = std::move(trial);
            else
                pend->dead = true;
        }
        if (!accepted.empty()) apply(*heur::exclusive_select(build_problem(accepted)), accepted);
    };

    // one nesting level at a time, so same-type instances compete regardless of parent
    std::vector<std::pair<const EnsembleInstance*, const EnsembleType*>> level;
    for (const auto& t : types_) level.emplace_back(nullptr, &t);

    while (!level.empty()) {
        std::deque<Pending> pendings;
        for (auto [parent, type] : level) {
            const BindingView* parent_view = nullptr;
            if (parent) {
                // parent views are aligned with result.instances
                for (std::size_t i = 0; i < result.instances.size(); ++i)
                    if (&result.instances[i] == parent) parent_view = &views[i];
            }
            // enumerate static assignments: product over roles of ascending-id subsets
            std::vector<RoleBinding> assignments{{}};
            for (const auto& role : type->static_roles) {
                const auto& cands = pop.ids_of_type(role.component_type);
                auto subsets = subsets_in_range(cands, role.lo, role.hi);
                std::vector<RoleBinding> next;
                for (const auto& partial : assignments)
                    for (const auto& subset : subsets) {
                        RoleBinding b = partial;
                        b[role.name] = subset;
                        next.push_back(std::move(b));
                    }
                assignments = std::move(next);
                if (assignments.size() > 200000)
                    throw ModelError(type->name + ": static role assignment space too large");
            }
            for (auto& binding : assignments) {
                Pending pend;
                pend.type = type;
                pend.statics = std::move(binding);
                pend.identity = (parent ? parent->identity + "/" : "") + type->name + "(" +
                                binding_str(pend.statics) + ")";
                pend.parent = parent;
                pend.parent_view = parent_view;
                resolve_roles(pend);
                if (!pend.dead) pendings.push_back(std::move(pend));
            }
        }

        // selector arbitration per ensemble type
        std::map<const EnsembleType*, std::vector<Pending*>> groups;
        for (auto& pend : pendings)
            if (pend.has_request) groups[pend.type].push_back(&pend);
        for (auto& [type, requests] : groups) arbitrate(requests);

        // finalize survivors in enumeration order; queue inner types
        level.clear();
        for (auto& pend : pendings) {
            if (pend.dead) continue;
            EnsembleInstance inst;
            inst.type = pend.type;
            inst.identity = pend.identity;
            inst.statics = std::move(pend.statics);
            inst.dynamics = std::move(pend.dynamics);
            inst.parent = pend.parent;
            result.instances.push_back(std::move(inst));
            EnsembleInstance& stored = result.instances.back();
            views.emplace_back(&stored.statics, &stored.dynamics, pend.parent_view);
            for (const auto& in : stored.type->inner) level.emplace_back(&stored, &in);
        }
    }

    // instance continuity
    std::set<std::string> live_now;
    for (auto& inst : result.instances) {
        live_now.insert(inst.identity);
        auto it = first_seen_.find(inst.identity);
        if (it != first_seen_.end() && live_prev_.count(inst.identity))
            inst.active_since = it->second;
        else
            inst.active_since = now;
        first_seen_[inst.identity] = inst.active_since;
    }
    for (auto it = first_seen_.begin(); it != first_seen_.end();)
        it = live_now.count(it->first) ? std::next(it) : first_seen_.erase(it);
    live_prev_ = std::move(live_now);

    // actions: permissions rebuilt from scratch, notifications deduped
    for (std::size_t i = 0; i < result.instances.size(); ++i) {
        const EnsembleInstance& inst = result.instances[i];
        EvalContext ctx{pop, views[i], now};
        for (const auto& action : inst.type->actions) {
            if (const auto* allow = std::get_if<AllowSpec>(&action)) {
                const IdList* ids = views[i].find(allow->target_role);
                if (!ids) throw ModelError(inst.identity + ": allow target unbound");
                ComponentId resource = allow->resource(ctx);
                for (const auto& id : *ids)
                    result.permissions.grants.insert({id, resource, allow->operation});
            } else {
                const auto& notify = std::get<NotifySpec>(action);
                const IdList* ids = views[i].find(notify.target_role);
                if (!ids) throw ModelError(inst.identity + ": notify target unbound");
                for (const auto& id : *ids) {
                    auto key = std::make_tuple(inst.identity, id, notify.tag);
                    if (delivered_.insert(key).second)
                        result.notifications.push_back({inst.identity, id, notify.tag});
                }
            }
        }
        if (debug_sink) {
            std::ostringstream line;
            line << now << ";" << inst.type->name << ";" << binding_str(inst.statics) << ";"
                 << binding_str(inst.dynamics);
            debug_sink(line.str());
        }
    }
    return result;
}

}  // namespace enkit::core
