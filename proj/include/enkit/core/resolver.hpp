#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <tuple>

#include "enkit/core/ensemble.hpp"

namespace enkit::core {

struct EnsembleInstance {
    const EnsembleType* type = nullptr;
    std::string identity;        // canonical: outer identities / type name / static binding
    RoleBinding statics;
    RoleBinding dynamics;
    const EnsembleInstance* parent = nullptr;
    TimeMin active_since = 0;    // first step of the current uninterrupted life
};

struct Permission {
    ComponentId component;
    ComponentId resource;
    std::string operation;
    auto operator<=>(const Permission&) const = default;
};

struct PermissionSet {
    std::set<Permission> grants;
    bool allows(const ComponentId& c, const ComponentId& r, const std::string& op) const {
        return grants.count(Permission{c, r, op}) != 0;
    }
};

struct Notification {
    std::string ensemble_identity;
    ComponentId component;
    std::string tag;
};

struct StepResult {
    std::deque<EnsembleInstance> instances;  // deque: stable parent pointers
    PermissionSet permissions;
    std::vector<Notification> notifications;  // newly delivered this step, in action order
};

// Single-instance dynamic-role resolution; the full resolver additionally
// arbitrates selector roles across competing instances. Returns nullopt when
// unsatisfiable. `bound_so_far` carries the roles resolved earlier for the
// same instance.
std::optional<IdList> populate_dynamic_role(const DynamicRoleSpec& role,
                                            const Population& pop,
                                            const BindingView& bound_so_far,
                                            TimeMin now);

// Per-step ensemble resolution engine. Stateless per step except for the
// notification dedup ledger and instance continuity (active_since); call
// reset_episode() at scenario episode boundaries to clear both.
class Resolver {
public:
    explicit Resolver(const TypeRegistry& registry) : registry_(&registry) {}

    // Validates role/type references and name uniqueness; registration order
    // is evaluation order.
    void register_ensemble_type(EnsembleType type);

    const std::vector<EnsembleType>& types() const { return types_; }

    // Full recomputation from scratch for time `now`: enumerate static
    // assignments in ascending id order, check situations, resolve dynamic
    // roles (condition roles first, then selector arbitration per
    // (type, role) group), recurse into inner types, then execute actions.
    StepResult resolve(const Population& pop, TimeMin now);

    void reset_episode();

    // Optional per-step debug sink; receives one line per live instance:
    // step;ensembleType;staticBinding;role=ids,...
    std::function<void(const std::string&)> debug_sink;

private:
    const TypeRegistry* registry_;
    std::vector<EnsembleType> types_;
    std::set<std::tuple<std::string, ComponentId, std::string>> delivered_;  // identity, comp, tag
    std::map<std::string, TimeMin> first_seen_;  // identity -> active_since
    std::set<std::string> live_prev_;
};

}  // namespace enkit::core
