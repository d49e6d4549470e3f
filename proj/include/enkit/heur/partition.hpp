#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace enkit::heur {

using Affinity = std::function<double(const std::string& component, const std::string& instance)>;

// Assign every component to exactly one instance, greedily maximizing
// affinity; components are processed in ascending id order and affinity ties
// go to the least-loaded instance (further ties: instance declaration order),
// which round-robins a uniform affinity. Deterministic; seed unused by the
// greedy policy (kept for signature parity).
std::map<std::string, std::string> partition(
    const std::vector<std::string>& components,
    const std::vector<std::string>& instances,
    const Affinity& affinity,
    std::uint64_t seed = 0);

}  // namespace enkit::heur
