#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "enkit/heur/selection.hpp"

namespace enkit::oracles {

// Exact feasibility of a SelectionProblem by memoized enumeration over
// candidates: each candidate serves one eligible instance or stays unused.
// State space (candidate index, remaining demand vector); intended for the
// small instances the random test generator produces.
inline bool selection_feasible(const heur::SelectionProblem& p) {
    std::map<std::string, std::size_t> inst_index;
    std::vector<std::size_t> remaining;
    for (const auto& inst : p.instances) {
        inst_index[inst.id] = remaining.size();
        remaining.push_back(inst.demand);
    }
    std::vector<std::vector<std::size_t>> eligible(p.candidates.size());
    for (std::size_t ci = 0; ci < p.candidates.size(); ++ci) {
        std::set<std::size_t> uniq;
        for (const auto& e : p.candidates[ci].eligible) uniq.insert(inst_index.at(e));
        eligible[ci].assign(uniq.begin(), uniq.end());
    }

    std::set<std::pair<std::size_t, std::vector<std::size_t>>> dead;
    std::function<bool(std::size_t)> go = [&](std::size_t ci) -> bool {
        bool done = true;
        std::size_t total = 0;
        for (std::size_t r : remaining) {
            if (r) done = false;
            total += r;
        }
        if (done) return true;
        if (ci == p.candidates.size()) return false;
        if (total > p.candidates.size() - ci) return false;  // supply bound
        auto key = std::make_pair(ci, remaining);
        if (dead.count(key)) return false;
        for (std::size_t ii : eligible[ci]) {
            if (remaining[ii] == 0) continue;
            --remaining[ii];
            bool ok = go(ci + 1);
            ++remaining[ii];
            if (ok) return true;
        }
        if (go(ci + 1)) return true;  // leave candidate unused
        dead.insert(std::move(key));
        return false;
    };
    return go(0);
}

// Invariant check for a returned assignment: exclusivity, eligibility,
// exact demands, known ids.
inline bool assignment_valid(const heur::SelectionProblem& p, const heur::Assignment& a) {
    std::map<std::string, std::set<std::string>> eligible_of;
    std::set<std::string> cand_ids;
    for (const auto& c : p.candidates) {
        cand_ids.insert(c.id);
        for (const auto& e : c.eligible) eligible_of[e].insert(c.id);
    }
    std::set<std::string> used;
    for (const auto& inst : p.instances) {
        auto it = a.find(inst.id);
        if (it == a.end() || it->second.size() != inst.demand) return false;
        for (const auto& cid : it->second) {
            if (!cand_ids.count(cid)) return false;
            if (!eligible_of[inst.id].count(cid)) return false;
            if (!used.insert(cid).second) return false;  // exclusivity
        }
    }
    return true;
}

}  // namespace enkit::oracles
