#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enkit/core/value.hpp"

namespace enkit::core {

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FieldSpec {
    std::string name;
    ValueKind kind;
};

// Schema for one kind of component. beyond_control marks components the
// runtime may observe but must never write (people, physical processes).
struct ComponentType {
    std::string name;
    std::vector<FieldSpec> fields;
    bool beyond_control = false;

    const FieldSpec* find_field(const std::string& field) const;
};

using TypeHandle = std::size_t;

class TypeRegistry {
public:
    TypeHandle register_component_type(ComponentType type);

    bool has(const std::string& name) const { return index_.count(name) != 0; }
    const ComponentType& at(const std::string& name) const;
    const ComponentType& at(TypeHandle h) const { return types_.at(h); }
    std::size_t size() const { return types_.size(); }

private:
    std::vector<ComponentType> types_;
    std::map<std::string, TypeHandle> index_;
};

struct ComponentInstance {
    ComponentId id;
    std::string type;
    std::map<std::string, Value> fields;

    const Value& field(const std::string& name) const;
    double number(const std::string& name) const { return field(name).as_number(); }
    bool boolean(const std::string& name) const { return field(name).as_bool(); }
    TimeMin time(const std::string& name) const { return field(name).as_time(); }
    const ComponentId& identifier(const std::string& name) const { return field(name).as_identifier(); }
    const IdList& id_list(const std::string& name) const { return field(name).as_id_list(); }
};

// Live component set, ordered by id so every enumeration is deterministic.
class Population {
public:
    explicit Population(const TypeRegistry& types) : types_(&types) {}

    // Validates the full schema: every declared field present with the right
    // kind, no extras, unique id, known type.
    ComponentInstance& add(ComponentInstance inst);

    bool has(const ComponentId& id) const { return comps_.count(id) != 0; }
    const ComponentInstance& at(const ComponentId& id) const;
    ComponentInstance& at(const ComponentId& id);

    // Ascending-id ids of all components of `type`.
    const std::vector<ComponentId>& ids_of_type(const std::string& type) const;

    auto begin() const { return comps_.begin(); }
    auto end() const { return comps_.end(); }
    std::size_t size() const { return comps_.size(); }

    const TypeRegistry& types() const { return *types_; }

private:
    const TypeRegistry* types_;
    std::map<ComponentId, ComponentInstance> comps_;
    std::map<std::string, std::vector<ComponentId>> by_type_;
};

}  // namespace enkit::core
