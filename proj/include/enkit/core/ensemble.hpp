#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "enkit/core/component.hpp"

namespace enkit::core {

using RoleBinding = std::map<std::string, IdList>;

struct EnsembleType;

// Role bindings visible to a predicate: the instance being resolved plus the
// chain of enclosing instances (inner types read outer roles, never write).
class BindingView {
public:
    BindingView(const RoleBinding* statics, const RoleBinding* dynamics, const BindingView* parent)
        : statics_(statics), dynamics_(dynamics), parent_(parent) {}

    const IdList* find(const std::string& role) const;
    const IdList& role(const std::string& role_name) const;
    // Convenience for [1,1] roles.
    const ComponentId& single(const std::string& role_name) const;

private:
    const RoleBinding* statics_;
    const RoleBinding* dynamics_;
    const BindingView* parent_;
};

// Everything a situation / membership predicate may read: observable
// component state, bound roles, and the clock.
struct EvalContext {
    const Population& pop;
    const BindingView& roles;
    TimeMin now;

    const ComponentInstance& comp(const ComponentId& id) const { return pop.at(id); }
    const ComponentInstance& bound(const std::string& role_name) const {
        return pop.at(roles.single(role_name));
    }
};

using SituationFn = std::function<bool(const EvalContext&)>;
using MembershipFn = std::function<bool(const EvalContext&, const ComponentInstance& candidate)>;

// --- cardinalities ------------------------------------------------------

struct CardinalityStar {};                       // any size, including 0
struct CardinalityInterval { std::size_t lo = 1, hi = 1; };
struct CardinalitySizeOf { std::string role; };  // exactly |binding(role)|
using Cardinality = std::variant<CardinalityStar, CardinalityInterval, CardinalitySizeOf>;

// --- roles --------------------------------------------------------------

struct StaticRoleSpec {
    std::string name;
    std::string component_type;
    std::size_t lo = 1, hi = 1;  // bound collection size; lo >= 1
};

// Exactly one of membership/selector is set. Condition roles bind *all*
// satisfying candidates and require the result size to fit the cardinality;
// selector roles delegate to exclusive selection with the cardinality as an
// exact target, competing with other instances resolved in the same step.
struct DynamicRoleSpec {
    std::string name;
    std::string component_type;
    Cardinality cardinality = CardinalityStar{};
    MembershipFn membership;
    MembershipFn selector_pool;                    // eligibility filter for selector roles
    bool use_selector = false;
    std::vector<std::string> attached_estimates;   // declaration bookkeeping (names)
};

// --- actions ------------------------------------------------------------

// Resolves the resource an allow grant refers to (may depend on bindings).
using ResourceFn = std::function<ComponentId(const EvalContext&)>;

struct AllowSpec {
    std::string target_role;
    ResourceFn resource;
    std::string operation;
};

struct NotifySpec {
    std::string target_role;
    std::string tag;
};

using ActionSpec = std::variant<AllowSpec, NotifySpec>;

// --- ensemble type ------------------------------------------------------

struct EnsembleType {
    std::string name;
    std::vector<StaticRoleSpec> static_roles;
    SituationFn situation;                 // empty -> always true
    std::vector<DynamicRoleSpec> dynamic_roles;
    std::vector<ActionSpec> actions;
    std::vector<EnsembleType> inner;       // instantiated only within a live outer instance
};

}  // namespace enkit::core
