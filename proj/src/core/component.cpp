#include "enkit/core/component.hpp"

#include <algorithm>
#include <set>

namespace enkit::core {

const char* to_string(ValueKind k) {
    switch (k) {
        case ValueKind::Number: return "number";
        case ValueKind::Boolean: return "boolean";
        case ValueKind::Time: return "time";
        case ValueKind::Position: return "position";
        case ValueKind::Identifier: return "identifier";
        case ValueKind::IdList: return "id_list";
    }
    return "?";
}

const FieldSpec* ComponentType::find_field(const std::string& field) const {
    for (const auto& f : fields)
        if (f.name == field) return &f;
    return nullptr;
}

TypeHandle TypeRegistry::register_component_type(ComponentType type) {
    if (type.name.empty()) throw ModelError("component type needs a name");
    if (index_.count(type.name))
        throw ModelError("duplicate component type: " + type.name);
    std::set<std::string> seen;
    for (const auto& f : type.fields)
        if (!seen.insert(f.name).second)
            throw ModelError("duplicate field '" + f.name + "' in component type " + type.name);
    TypeHandle h = types_.size();
    index_.emplace(type.name, h);
    types_.push_back(std::move(type));
    return h;
}

const ComponentType& TypeRegistry::at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ModelError("unknown component type: " + name);
    return types_[it->second];
}

const Value& ComponentInstance::field(const std::string& name) const {
    auto it = fields.find(name);
    if (it == fields.end())
        throw ModelError("component " + id + " has no field '" + name + "'");
    return it->second;
}

ComponentInstance& Population::add(ComponentInstance inst) {
    if (inst.id.empty()) throw ModelError("component needs an id");
    if (comps_.count(inst.id)) throw ModelError("duplicate component id: " + inst.id);
    const ComponentType& type = types_->at(inst.type);
    for (const auto& f : type.fields) {
        auto it = inst.fields.find(f.name);
        if (it == inst.fields.end())
            throw ModelError("component " + inst.id + " missing field '" + f.name + "'");
        if (it->second.kind() != f.kind)
            throw ModelError("component " + inst.id + " field '" + f.name + "' has kind " +
                             to_string(it->second.kind()) + ", schema wants " + to_string(f.kind));
    }
    for (const auto& [name, v] : inst.fields)
        if (!type.find_field(name))
            throw ModelError("component " + inst.id + " has undeclared field '" + name + "'");
    auto [it, ok] = comps_.emplace(inst.id, std::move(inst));
    (void)ok;
    auto& ids = by_type_[it->second.type];
    ids.insert(std::lower_bound(ids.begin(), ids.end(), it->first), it->first);
    return it->second;
}

const ComponentInstance& Population::at(const ComponentId& id) const {
    auto it = comps_.find(id);
    if (it == comps_.end()) throw ModelError("no component with id " + id);
    return it->second;
}

ComponentInstance& Population::at(const ComponentId& id) {
    auto it = comps_.find(id);
    if (it == comps_.end()) throw ModelError("no component with id " + id);
    return it->second;
}

const std::vector<ComponentId>& Population::ids_of_type(const std::string& type) const {
    static const std::vector<ComponentId> kNone;
    auto it = by_type_.find(type);
    return it == by_type_.end() ? kNone : it->second;
}

}  // namespace enkit::core
