#include "enkit/heur/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace enkit::heur {

std::map<std::string, std::string> partition(
    const std::vector<std::string>& components,
    const std::vector<std::string>& instances,
    const Affinity& affinity,
    std::uint64_t) {
    if (instances.empty()) throw std::invalid_argument("partition needs at least one instance");

    std::vector<std::string> comps = components;
    std::sort(comps.begin(), comps.end());

    std::map<std::string, std::string> out;
    std::vector<std::size_t> load(instances.size(), 0);

    for (const auto& comp : comps) {
        std::size_t best = 0;
        double best_aff = affinity(comp, instances[0]);
        for (std::size_t i = 1; i < instances.size(); ++i) {
            double a = affinity(comp, instances[i]);
            if (a > best_aff || (a == best_aff && load[i] < load[best])) {
                best = i;
                best_aff = a;
            }
        }
        out[comp] = instances[best];
        ++load[best];
    }
    return out;
}

}  // namespace enkit::heur
