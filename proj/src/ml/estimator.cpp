#include "enkit/ml/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <random>

#include "enkit/core/rng.hpp"

namespace enkit::ml {

namespace {

constexpr double kProbFloor = 1e-12;

void put_hex(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", v);
    out << buf;
}

double read_double(std::istream& in) {
    std::string tok;
    if (!(in >> tok)) throw EstimateError("truncated checkpoint");
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str()) throw EstimateError("bad checkpoint number: " + tok);
    return v;
}

}  // namespace

const char* to_string(OutputKind k) {
    switch (k) {
        case OutputKind::Binary: return "binary";
        case OutputKind::Categorical: return "categorical";
        case OutputKind::Continuous: return "continuous";
    }
    return "?";
}

Estimator::Estimator(OutputKind kind, std::size_t in_dim, std::size_t classes,
                     std::vector<bool> standardize_mask, std::size_t hidden,
                     std::uint64_t init_seed)
    : kind_(kind),
      in_dim_(in_dim),
      hidden_(hidden),
      out_dim_(kind == OutputKind::Categorical ? classes : 1),
      standardize_(std::move(standardize_mask)),
      mean_(in_dim, 0.0),
      spread_(in_dim, 1.0) {
    if (in_dim_ == 0 || hidden_ == 0) throw EstimateError("estimator needs nonzero dimensions");
    if (kind == OutputKind::Categorical && classes < 2)
        throw EstimateError("categorical estimator needs at least two classes");
    standardize_.resize(in_dim_, false);

    // Glorot-uniform layer init, biases zero; draws in a fixed order so a
    // seed pins every weight.
    std::mt19937_64 rng(core::mix64(init_seed));
    auto glorot = [&](std::vector<double>& w, std::size_t fan_in, std::size_t fan_out) {
        double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (auto& v : w) v = (2.0 * core::uniform01(rng) - 1.0) * limit;
    };
    w1_.assign(hidden_ * in_dim_, 0.0);
    b1_.assign(hidden_, 0.0);
    w2_.assign(out_dim_ * hidden_, 0.0);
    b2_.assign(out_dim_, 0.0);
    glorot(w1_, in_dim_, hidden_);
    glorot(w2_, hidden_, out_dim_);
}

void Estimator::scale_into(const double* raw, std::vector<double>& x) const {
    x.resize(in_dim_);
    for (std::size_t f = 0; f < in_dim_; ++f)
        x[f] = standardize_[f] ? (raw[f] - mean_[f]) / spread_[f] : raw[f];
}

void Estimator::freeze_scaling(const TrainingDataset& data) {
    if (frozen_) return;
    for (std::size_t f = 0; f < in_dim_; ++f) {
        if (!standardize_[f]) continue;
        double sum = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) sum += data.row(i)[f];
        double mean = sum / static_cast<double>(data.size());
        double var = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            double d = data.row(i)[f] - mean;
            var += d * d;
        }
        double sd = std::sqrt(var / static_cast<double>(data.size()));
        mean_[f] = mean;
        spread_[f] = sd > 1e-12 ? sd : 1.0;
    }
    frozen_ = true;
}

void Estimator::forward(const std::vector<double>& x, std::vector<double>& hidden_act,
                        std::vector<double>& out) const {
    hidden_act.assign(hidden_, 0.0);
    for (std::size_t h = 0; h < hidden_; ++h) {
        double z = b1_[h];
        const double* wrow = w1_.data() + h * in_dim_;
        for (std::size_t f = 0; f < in_dim_; ++f) z += wrow[f] * x[f];
        hidden_act[h] = z > 0.0 ? z : 0.0;
    }
    out.assign(out_dim_, 0.0);
    for (std::size_t o = 0; o < out_dim_; ++o) {
        double z = b2_[o];
        const double* wrow = w2_.data() + o * hidden_;
        for (std::size_t h = 0; h < hidden_; ++h) z += wrow[h] * hidden_act[h];
        out[o] = z;
    }
    switch (kind_) {
        case OutputKind::Binary:
            out[0] = 1.0 / (1.0 + std::exp(-out[0]));
            break;
        case OutputKind::Categorical: {
            double mx = *std::max_element(out.begin(), out.end());
            double sum = 0.0;
            for (auto& v : out) {
                v = std::exp(v - mx);
                sum += v;
            }
            for (auto& v : out) v /= sum;
            break;
        }
        case OutputKind::Continuous:
            break;
    }
}

std::vector<double> Estimator::predict(const std::vector<double>& raw) const {
    if (raw.size() != in_dim_)
        throw EstimateError("input width " + std::to_string(raw.size()) + ", expected " +
                            std::to_string(in_dim_));
    std::vector<double> x, hidden_act, out;
    scale_into(raw.data(), x);
    forward(x, hidden_act, out);
    return out;
}

double Estimator::mean_loss(const TrainingDataset& data) const {
    if (data.empty()) throw EstimateError("loss of an empty dataset");
    double total = 0.0;
    std::vector<double> x, hidden_act, out;
    for (std::size_t i = 0; i < data.size(); ++i) {
        scale_into(data.row(i), x);
        forward(x, hidden_act, out);
        double y = data.labels[i];
        switch (kind_) {
            case OutputKind::Binary: {
                double p = std::clamp(out[0], kProbFloor, 1.0 - kProbFloor);
                total += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
                break;
            }
            case OutputKind::Categorical: {
                auto cls = static_cast<std::size_t>(y);
                if (cls >= out_dim_) throw EstimateError("label out of class range");
                total += -std::log(std::max(out[cls], kProbFloor));
                break;
            }
            case OutputKind::Continuous: {
                double d = out[0] - y;
                total += d * d;
                break;
            }
        }
    }
    return total / static_cast<double>(data.size());
}

std::vector<double> Estimator::parameters() const {
    std::vector<double> flat;
    flat.reserve(w1_.size() + b1_.size() + w2_.size() + b2_.size());
    for (const auto* v : {&w1_, &b1_, &w2_, &b2_}) flat.insert(flat.end(), v->begin(), v->end());
    return flat;
}

void Estimator::set_parameters(const std::vector<double>& flat) {
    if (flat.size() != w1_.size() + b1_.size() + w2_.size() + b2_.size())
        throw EstimateError("parameter vector size mismatch");
    auto it = flat.begin();
    for (auto* v : {&w1_, &b1_, &w2_, &b2_}) {
        std::copy(it, it + static_cast<std::ptrdiff_t>(v->size()), v->begin());
        it += static_cast<std::ptrdiff_t>(v->size());
    }
}

void Estimator::zero_grads(Scratch& s) const {
    s.gw1.assign(w1_.size(), 0.0);
    s.gb1.assign(b1_.size(), 0.0);
    s.gw2.assign(w2_.size(), 0.0);
    s.gb2.assign(b2_.size(), 0.0);
    s.dz2.assign(out_dim_, 0.0);
}

void Estimator::accumulate_example(const double* raw, double y, Scratch& s) const {
    scale_into(raw, s.x);
    forward(s.x, s.hidden_act, s.out);
    // head gradient d(loss)/d(z2): identical algebraic shape for
    // sigmoid+BCE and softmax+CCE; doubled residual for squared error
    switch (kind_) {
        case OutputKind::Binary:
            s.dz2[0] = s.out[0] - y;
            break;
        case OutputKind::Categorical:
            for (std::size_t o = 0; o < out_dim_; ++o)
                s.dz2[o] = s.out[o] - (static_cast<std::size_t>(y) == o ? 1.0 : 0.0);
            break;
        case OutputKind::Continuous:
            s.dz2[0] = 2.0 * (s.out[0] - y);
            break;
    }
    for (std::size_t o = 0; o < out_dim_; ++o) {
        s.gb2[o] += s.dz2[o];
        for (std::size_t h = 0; h < hidden_; ++h)
            s.gw2[o * hidden_ + h] += s.dz2[o] * s.hidden_act[h];
    }
    for (std::size_t h = 0; h < hidden_; ++h) {
        if (s.hidden_act[h] <= 0.0) continue;  // rectifier gate
        double da = 0.0;
        for (std::size_t o = 0; o < out_dim_; ++o) da += s.dz2[o] * w2_[o * hidden_ + h];
        s.gb1[h] += da;
        for (std::size_t f = 0; f < in_dim_; ++f) s.gw1[h * in_dim_ + f] += da * s.x[f];
    }
}

std::vector<double> Estimator::gradient(const TrainingDataset& data) const {
    if (data.empty()) throw EstimateError("gradient of an empty dataset");
    Scratch s;
    zero_grads(s);
    for (std::size_t i = 0; i < data.size(); ++i)
        accumulate_example(data.row(i), data.labels[i], s);

    double inv = 1.0 / static_cast<double>(data.size());
    std::vector<double> flat;
    flat.reserve(s.gw1.size() + s.gb1.size() + s.gw2.size() + s.gb2.size());
    for (const auto* v : {&s.gw1, &s.gb1, &s.gw2, &s.gb2})
        for (double g : *v) flat.push_back(g * inv);
    return flat;
}

void Estimator::fit(const TrainingDataset& data, const TrainConfig& cfg) {
    if (data.empty()) throw EstimateError("training on an empty dataset");
    if (data.dim != in_dim_)
        throw EstimateError("dataset width " + std::to_string(data.dim) + ", expected " +
                            std::to_string(in_dim_));
    freeze_scaling(data);

    if (kind_ == OutputKind::Binary) {
        bool saw0 = false, saw1 = false;
        for (double y : data.labels) (y < 0.5 ? saw0 : saw1) = true;
        if (!(saw0 && saw1)) degenerate_ = true;
    }

    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    Scratch s;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::mt19937_64 rng(core::derive_seed(cfg.seed, epoch));
        core::seeded_shuffle(order, rng);
        for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch) {
            std::size_t end = std::min(begin + cfg.batch, order.size());
            zero_grads(s);
            for (std::size_t k = begin; k < end; ++k)
                accumulate_example(data.row(order[k]), data.labels[order[k]], s);
            double step = cfg.learning_rate / static_cast<double>(end - begin);
            auto apply = [&](std::vector<double>& w, const std::vector<double>& g) {
                for (std::size_t j = 0; j < w.size(); ++j) w[j] -= step * g[j];
            };
            apply(w1_, s.gw1);
            apply(b1_, s.gb1);
            apply(w2_, s.gw2);
            apply(b2_, s.gb2);
        }
    }
}

void Estimator::save(std::ostream& out) const {
    out << "estimator-v1\n";
    out << "kind " << to_string(kind_) << "\n";
    out << "dims " << in_dim_ << " " << hidden_ << " " << out_dim_ << "\n";
    out << "frozen " << (frozen_ ? 1 : 0) << " degenerate " << (degenerate_ ? 1 : 0) << "\n";
    out << "scaling";
    for (std::size_t f = 0; f < in_dim_; ++f) {
        out << " " << (standardize_[f] ? 1 : 0) << " ";
        put_hex(out, mean_[f]);
        out << " ";
        put_hex(out, spread_[f]);
    }
    out << "\n";
    for (const auto* v : {&w1_, &b1_, &w2_, &b2_}) {
        bool first = true;
        for (double x : *v) {
            if (!first) out << " ";
            put_hex(out, x);
            first = false;
        }
        out << "\n";
    }
}

Estimator Estimator::load(std::istream& in) {
    std::string tok;
    in >> tok;
    if (tok != "estimator-v1") throw EstimateError("unknown checkpoint header: " + tok);
    Estimator e;
    in >> tok >> tok;
    if (tok == "binary") e.kind_ = OutputKind::Binary;
    else if (tok == "categorical") e.kind_ = OutputKind::Categorical;
    else if (tok == "continuous") e.kind_ = OutputKind::Continuous;
    else throw EstimateError("unknown estimator kind: " + tok);
    int frozen = 0, degenerate = 0;
    in >> tok >> e.in_dim_ >> e.hidden_ >> e.out_dim_;
    in >> tok >> frozen >> tok >> degenerate;
    if (!in) throw EstimateError("truncated checkpoint");
    e.frozen_ = frozen != 0;
    e.degenerate_ = degenerate != 0;
    in >> tok;  // "scaling"
    e.standardize_.assign(e.in_dim_, false);
    e.mean_.assign(e.in_dim_, 0.0);
    e.spread_.assign(e.in_dim_, 1.0);
    for (std::size_t f = 0; f < e.in_dim_; ++f) {
        int flag = 0;
        in >> flag;
        e.standardize_[f] = flag != 0;
        e.mean_[f] = read_double(in);
        e.spread_[f] = read_double(in);
    }
    e.w1_.assign(e.hidden_ * e.in_dim_, 0.0);
    e.b1_.assign(e.hidden_, 0.0);
    e.w2_.assign(e.out_dim_ * e.hidden_, 0.0);
    e.b2_.assign(e.out_dim_, 0.0);
    for (auto* v : {&e.w1_, &e.b1_, &e.w2_, &e.b2_})
        for (auto& x : *v) x = read_double(in);
    return e;
}

}  // namespace enkit::ml
