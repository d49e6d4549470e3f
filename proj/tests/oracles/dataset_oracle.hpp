#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "enkit/ml/dataset.hpp"

namespace enkit::oracles {

// A scripted observation trace: everything the collector saw, flattened.
struct TraceEntry {
    std::int64_t tick;
    std::string context_id;
    bool guard = true;
    bool relevant = true;
    std::vector<double> features;  // extractor outputs at `tick`
    bool label_readable = true;
    double label = 0.0;
};

// Reference dataset builder: a plain nested loop over (entry, horizon)
// pairs, no rolling buffer. An example (t, inputs@past, label@now) exists
// exactly when the present entry passes the guard with a readable label and
// the past entry passed both guard and relevance.
inline ml::TrainingDataset dataset_by_nested_loop(const std::vector<TraceEntry>& trace,
                                                  std::int64_t min_t, std::int64_t max_t) {
    std::map<std::pair<std::string, std::int64_t>, const TraceEntry*> recorded;
    for (const auto& e : trace)
        if (e.guard && e.relevant) recorded[{e.context_id, e.tick}] = &e;

    ml::TrainingDataset ds;
    double denom = max_t == min_t ? 1.0 : static_cast<double>(max_t - min_t);
    for (const auto& now_entry : trace) {
        if (!now_entry.guard || !now_entry.label_readable) continue;
        for (std::int64_t t = min_t; t <= max_t; ++t) {
            auto it = recorded.find({now_entry.context_id, now_entry.tick - t});
            if (it == recorded.end()) continue;
            std::vector<double> row;
            row.push_back(static_cast<double>(t - min_t) / denom);
            row.insert(row.end(), it->second->features.begin(), it->second->features.end());
            ds.append(t, row, now_entry.label);
        }
    }
    return ds;
}

inline bool datasets_equal(const ml::TrainingDataset& a, const ml::TrainingDataset& b) {
    return a.dim == b.dim && a.ts == b.ts && a.inputs == b.inputs && a.labels == b.labels;
}

}  // namespace enkit::oracles
