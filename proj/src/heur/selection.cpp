#include "enkit/heur/selection.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>

namespace enkit::heur {

void validate(const SelectionProblem& p) {
    std::set<std::string> inst_ids;
    for (const auto& inst : p.instances)
        if (!inst_ids.insert(inst.id).second)
            throw std::invalid_argument("duplicate instance id: " + inst.id);
    std::set<std::string> cand_ids;
    for (const auto& c : p.candidates) {
        if (!cand_ids.insert(c.id).second)
            throw std::invalid_argument("duplicate candidate id: " + c.id);
        if (c.eligible.empty())
            throw std::invalid_argument("candidate " + c.id + " has empty eligibility");
        for (const auto& e : c.eligible)
            if (!inst_ids.count(e))
                throw std::invalid_argument("candidate " + c.id + " eligible for unknown instance " + e);
    }
}

std::optional<Assignment> exclusive_select(const SelectionProblem& p, std::uint64_t) {
    validate(p);

    // eligible candidates per instance, and how contested each candidate is
    std::map<std::string, std::vector<std::size_t>> eligible_of;
    for (const auto& inst : p.instances) eligible_of[inst.id];
    std::vector<std::size_t> degree(p.candidates.size(), 0);
    for (std::size_t ci = 0; ci < p.candidates.size(); ++ci) {
        std::set<std::string> uniq(p.candidates[ci].eligible.begin(), p.candidates[ci].eligible.end());
        for (const auto& e : uniq) {
            eligible_of[e].push_back(ci);
            ++degree[ci];
        }
    }

    // process instances by ascending slack; ties keep the problem's order
    std::vector<std::size_t> order(p.instances.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto slack = [&](std::size_t i) {
        const auto& inst = p.instances[i];
        return static_cast<long long>(eligible_of[inst.id].size()) -
               static_cast<long long>(inst.demand);
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return slack(a) < slack(b); });

    std::vector<bool> taken(p.candidates.size(), false);
    Assignment out;
    for (const auto& inst : p.instances) out[inst.id];

    for (std::size_t i : order) {
        const auto& inst = p.instances[i];
        std::vector<std::size_t> avail;
        for (std::size_t ci : eligible_of[inst.id])
            if (!taken[ci]) avail.push_back(ci);
        if (avail.size() < inst.demand) return std::nullopt;  // greedy pass cannot complete
        std::sort(avail.begin(), avail.end(), [&](std::size_t a, std::size_t b) {
            const auto& ca = p.candidates[a];
            const auto& cb = p.candidates[b];
            if (ca.cost != cb.cost) return ca.cost < cb.cost;
            if (degree[a] != degree[b]) return degree[a] < degree[b];
            return ca.id < cb.id;
        });
        auto& chosen = out[inst.id];
        for (std::size_t k = 0; k < inst.demand; ++k) {
            taken[avail[k]] = true;
            chosen.push_back(p.candidates[avail[k]].id);
        }
        std::sort(chosen.begin(), chosen.end());
    }
    return out;
}

std::optional<Assignment> exclusive_select_exact(const SelectionProblem& p, std::uint64_t) {
    validate(p);

    // one unit slot per demand unit, in instance order
    std::vector<std::size_t> slot_inst;
    for (std::size_t i = 0; i < p.instances.size(); ++i)
        for (std::size_t d = 0; d < p.instances[i].demand; ++d) slot_inst.push_back(i);

    // candidate adjacency per slot, in ascending (cost, id) order
    std::vector<std::size_t> cand_order(p.candidates.size());
    for (std::size_t i = 0; i < cand_order.size(); ++i) cand_order[i] = i;
    std::sort(cand_order.begin(), cand_order.end(), [&](std::size_t a, std::size_t b) {
        if (p.candidates[a].cost != p.candidates[b].cost)
            return p.candidates[a].cost < p.candidates[b].cost;
        return p.candidates[a].id < p.candidates[b].id;
    });
    std::map<std::string, std::vector<std::size_t>> eligible_of;
    for (const auto& inst : p.instances) eligible_of[inst.id];
    for (std::size_t rank : cand_order)
        for (const auto& e : std::set<std::string>(p.candidates[rank].eligible.begin(),
                                                   p.candidates[rank].eligible.end()))
            eligible_of[e].push_back(rank);

    std::vector<std::size_t> match_of_cand(p.candidates.size(), SIZE_MAX);  // candidate -> slot
    std::function<bool(std::size_t, std::vector<bool>&)> augment =
        [&](std::size_t slot, std::vector<bool>& visited) {
            for (std::size_t ci : eligible_of[p.instances[slot_inst[slot]].id]) {
                if (visited[ci]) continue;
                visited[ci] = true;
                if (match_of_cand[ci] == SIZE_MAX || augment(match_of_cand[ci], visited)) {
                    match_of_cand[ci] = slot;
                    return true;
                }
            }
            return false;
        };
    for (std::size_t slot = 0; slot < slot_inst.size(); ++slot) {
        std::vector<bool> visited(p.candidates.size(), false);
        if (!augment(slot, visited)) return std::nullopt;
    }

    Assignment out;
    for (const auto& inst : p.instances) out[inst.id];
    for (std::size_t ci = 0; ci < p.candidates.size(); ++ci)
        if (match_of_cand[ci] != SIZE_MAX)
            out[p.instances[slot_inst[match_of_cand[ci]]].id].push_back(p.candidates[ci].id);
    for (auto& [id, ids] : out) std::sort(ids.begin(), ids.end());
    return out;
}

}  // namespace enkit::heur
