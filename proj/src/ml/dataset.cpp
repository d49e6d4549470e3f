#include "enkit/ml/dataset.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace enkit::ml {

void TrainingDataset::append(std::int64_t t, const std::vector<double>& row_values, double label) {
    if (dim == 0) dim = row_values.size();
    if (row_values.size() != dim)
        throw std::invalid_argument("training example width " + std::to_string(row_values.size()) +
                                    " does not match dataset width " + std::to_string(dim));
    ts.push_back(t);
    inputs.insert(inputs.end(), row_values.begin(), row_values.end());
    labels.push_back(label);
}

void TrainingDataset::append_all(const TrainingDataset& other) {
    if (other.empty()) return;
    if (dim == 0) dim = other.dim;
    if (other.dim != dim) throw std::invalid_argument("dataset width mismatch on append");
    ts.insert(ts.end(), other.ts.begin(), other.ts.end());
    inputs.insert(inputs.end(), other.inputs.begin(), other.inputs.end());
    labels.insert(labels.end(), other.labels.begin(), other.labels.end());
}

void TrainingDataset::clear() {
    ts.clear();
    inputs.clear();
    labels.clear();
}

namespace {

void put_hex(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", v);
    out << buf;
}

double parse_double(const std::string& cell) {
    char* end = nullptr;
    double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str()) throw std::invalid_argument("bad numeric cell: " + cell);
    return v;
}

}  // namespace

void write_csv(const TrainingDataset& ds, std::ostream& out) {
    out << "t";
    for (std::size_t f = 0; f < ds.dim; ++f) out << ",feat_" << f;
    out << ",label\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out << ds.ts[i];
        const double* r = ds.row(i);
        for (std::size_t f = 0; f < ds.dim; ++f) {
            out << ",";
            put_hex(out, r[f]);
        }
        out << ",";
        put_hex(out, ds.labels[i]);
        out << "\n";
    }
}

TrainingDataset read_csv(std::istream& in) {
    TrainingDataset ds;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty dataset file");
    std::size_t cols = 1;
    for (char c : line) cols += c == ',';
    if (cols < 2) throw std::invalid_argument("malformed dataset header");
    ds.dim = cols - 2;

    std::vector<double> row(ds.dim);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream cells(line);
        std::string cell;
        if (!std::getline(cells, cell, ',')) throw std::invalid_argument("missing t column");
        std::int64_t t = std::strtoll(cell.c_str(), nullptr, 10);
        for (std::size_t f = 0; f < ds.dim; ++f) {
            if (!std::getline(cells, cell, ',')) throw std::invalid_argument("short row");
            row[f] = parse_double(cell);
        }
        if (!std::getline(cells, cell, ',')) throw std::invalid_argument("missing label");
        ds.append(t, row, parse_double(cell));
    }
    return ds;
}

}  // namespace enkit::ml
