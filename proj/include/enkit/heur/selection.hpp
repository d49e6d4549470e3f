#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace enkit::heur {

// One consumer competing for candidates: wants exactly `demand` of them.
struct SelectionInstance {
    std::string id;
    std::size_t demand = 0;
};

struct SelectionCandidate {
    std::string id;
    std::vector<std::string> eligible;  // instance ids this candidate may serve; never empty
    double cost = 0.0;
};

struct SelectionProblem {
    std::vector<SelectionInstance> instances;
    std::vector<SelectionCandidate> candidates;
};

// instance id -> candidate ids, pairwise disjoint, |assignment(i)| == demand(i).
using Assignment = std::map<std::string, std::vector<std::string>>;

// Exclusive selection: each candidate serves at most one instance and every
// instance must receive exactly its demand, else the whole result is
// infeasible (nullopt). Greedy: instances by ascending slack
// (|eligible| - demand), candidates by ascending (cost, eligible-degree, id).
// Deterministic; the seed is part of the signature for parity with the other
// heuristics but the policy never consults it.
std::optional<Assignment> exclusive_select(const SelectionProblem& problem,
                                           std::uint64_t seed = 0);

// Exact fallback: augmenting-path bipartite b-matching over unit slots.
// Complete (INFEASIBLE only when no exclusive assignment exists) but ignores
// costs beyond deterministic tie-ordering; O(slots * edges).
std::optional<Assignment> exclusive_select_exact(const SelectionProblem& problem,
                                                 std::uint64_t seed = 0);

// Throws std::invalid_argument on malformed input (unknown instance in an
// eligibility list, duplicate ids, empty eligibility).
void validate(const SelectionProblem& problem);

}  // namespace enkit::heur
