#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace enkit::ml {

// Column-packed training data: one row per example, `dim` doubles per row.
// Row layout: [scaled horizon, extractor features...]; the raw integer
// horizon is kept alongside for exact reconstruction checks and CSV export.
struct TrainingDataset {
    std::string estimate_name;
    std::string run_id;
    std::int64_t window_begin = 0, window_end = 0;  // provenance: collection span
    std::size_t dim = 0;

    std::vector<std::int64_t> ts;
    std::vector<double> inputs;  // ts.size() * dim, row-major
    std::vector<double> labels;

    std::size_t size() const { return ts.size(); }
    bool empty() const { return ts.empty(); }
    const double* row(std::size_t i) const { return inputs.data() + i * dim; }

    void append(std::int64_t t, const std::vector<double>& row_values, double label);
    void append_all(const TrainingDataset& other);  // dims must match
    void clear();
};

// CSV with header `t,feat_0,...,feat_{n-1},label`; hexfloat cells so a
// write/read cycle reproduces every double bit-exactly.
void write_csv(const TrainingDataset& ds, std::ostream& out);
TrainingDataset read_csv(std::istream& in);

}  // namespace enkit::ml
