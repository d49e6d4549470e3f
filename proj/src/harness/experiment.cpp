#include "enkit/harness/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "enkit/ml/dataset.hpp"

namespace enkit::harness {

namespace fs = std::filesystem;

namespace {

int cutoff_of(const BoundaryDump& dump, int first_day, int last_day) {
    int cutoff = 0;
    for (int o = 1; o <= 30; ++o) {
        double sum = 0.0;
        for (int d = first_day; d <= last_day; ++d) sum += dump.probability[d][o - 1];
        if (sum / (last_day - first_day + 1) < 0.5) cutoff = o;
    }
    return cutoff;
}

std::string fmt_prob(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

BoundaryDump dump_boundary(const std::function<double(int dow, int offset)>& prob) {
    BoundaryDump dump;
    for (int d = 0; d < 7; ++d)
        for (int o = 1; o <= 30; ++o) dump.probability[d][o - 1] = prob(d, o);
    dump.business_cutoff = cutoff_of(dump, 0, 4);
    dump.weekend_cutoff = cutoff_of(dump, 5, 6);
    return dump;
}

BoundaryDump dump_boundary(ml::ValueEstimate& estimate) {
    return dump_boundary([&estimate](int dow, int offset) {
        // probe an absent worker `offset` minutes before a start on day dow;
        // only the clock enters the input pipeline
        core::TimeMin start = static_cast<core::TimeMin>(dow) * 1440 + 480;
        ml::EstimateContext ctx{nullptr, nullptr, nullptr, start - offset};
        return estimate.predict_at(ctx, start, start - offset)[0];
    });
}

double will_arrive_probability(const ml::Estimator& model, int dow, int offset) {
    // input layout of the willArrive estimate: encoded horizon
    // (offset - 1) / 29 for the 1..30 window, then the day one-hot
    std::vector<double> row;
    row.reserve(8);
    row.push_back(static_cast<double>(offset - 1) / 29.0);
    for (int d = 0; d < 7; ++d) row.push_back(d == dow ? 1.0 : 0.0);
    return model.predict(row)[0];
}

void write_boundary_csv(const BoundaryDump& dump, std::ostream& out) {
    out << "day_of_week,offset,probability,business_cutoff,weekend_cutoff\n";
    for (int d = 0; d < 7; ++d)
        for (int o = 1; o <= 30; ++o)
            out << d << ',' << o << ',' << fmt_prob(dump.probability[d][o - 1]) << ','
                << dump.business_cutoff << ',' << dump.weekend_cutoff << '\n';
}

BoundaryDump read_boundary_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) ||
        line != "day_of_week,offset,probability,business_cutoff,weekend_cutoff")
        throw std::runtime_error("boundary csv: bad header");
    BoundaryDump dump;
    std::array<std::array<bool, 30>, 7> seen{};
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 5) throw std::runtime_error("boundary csv: bad row '" + line + "'");
        int d = std::stoi(cells[0]);
        int o = std::stoi(cells[1]);
        if (d < 0 || d > 6 || o < 1 || o > 30)
            throw std::runtime_error("boundary csv: out-of-range row '" + line + "'");
        dump.probability[d][o - 1] = std::stod(cells[2]);
        dump.business_cutoff = std::stoi(cells[3]);
        dump.weekend_cutoff = std::stoi(cells[4]);
        seen[d][o - 1] = true;
    }
    for (const auto& day : seen)
        for (bool s : day)
            if (!s) throw std::runtime_error("boundary csv: incomplete grid");
    return dump;
}

void write_metrics_csv(const std::vector<MetricsRow>& rows, std::ostream& out) {
    out << kMetricsHeader << '\n';
    for (const auto& r : rows)
        out << r.week << ',' << r.day << ',' << r.day_of_week << ',' << r.shift_id << ','
            << r.policy << ',' << r.standbys_called << ',' << r.canceled << ',' << r.lateness
            << '\n';
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kMetricsHeader)
        throw std::runtime_error("metrics csv: bad header");
    std::vector<MetricsRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 8) throw std::runtime_error("metrics csv: bad row '" + line + "'");
        MetricsRow r;
        r.week = std::stoull(cells[0]);
        r.day = std::stoll(cells[1]);
        r.day_of_week = std::stoi(cells[2]);
        r.shift_id = cells[3];
        r.policy = cells[4];
        r.standbys_called = std::stoll(cells[5]);
        r.canceled = std::stoll(cells[6]);
        r.lateness = std::stoll(cells[7]);
        rows.push_back(std::move(r));
    }
    return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.weeks < 1) throw ConfigError("weeks: must be at least 1");
    if (cfg.policy_schedule.empty()) throw ConfigError("policy_schedule: empty schedule");

    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);

    ExperimentResult result;
    factory::FactorySim sim(cfg.scenario);

    std::ofstream trace;
    if (cfg.verbose) {
        fs::path path = out_dir / "trace.txt";
        trace = open_out(path);
        sim.debug_sink = [&trace](const std::string& line) { trace << line << '\n'; };
        result.artifacts.push_back(path.string());
    }

    for (std::size_t week = 1; week <= cfg.weeks; ++week) {
        factory::Policy policy = policy_for_week(cfg, week);
        for (int d = 0; d < 7; ++d) {
            std::int64_t day = static_cast<std::int64_t>(week - 1) * 7 + d;
            factory::DayResult r = sim.run_day(day, policy);
            for (std::size_t s = 0; s < r.shifts.size(); ++s)
                result.rows.push_back({week, day, factory::day_of_week(day),
                                       "shift-" + std::to_string(s + 1), factory::to_string(policy),
                                       r.shifts[s].standbys_called, r.shifts[s].canceled,
                                       r.shifts[s].lateness});
            result.infeasible_ticks += r.infeasible_ticks;
            result.ml_fallback_ticks += r.ml_fallback_ticks;
            result.access_violation |= r.access_violation;
            result.duplicate_standby |= r.duplicate_standby;
        }

        if (week < cfg.weeks) {
            ml::TrainConfig tc = cfg.training;
            tc.seed = cfg.scenario.seed;  // one seed drives the whole experiment
            sim.will_arrive().train(tc, cfg.full_retrain);
            ++result.trainings;

            fs::path ckpt = out_dir / ("estimator-week" + std::to_string(week) + ".ckpt");
            auto out = open_out(ckpt);
            sim.will_arrive().model().save(out);
            result.artifacts.push_back(ckpt.string());
        }
    }

    {
        fs::path path = out_dir / "metrics.csv";
        auto out = open_out(path);
        write_metrics_csv(result.rows, out);
        result.artifacts.push_back(path.string());
    }
    if (sim.will_arrive().trained()) {
        result.boundary = dump_boundary(sim.will_arrive());
        fs::path path = out_dir / "boundary.csv";
        auto out = open_out(path);
        write_boundary_csv(*result.boundary, out);
        result.artifacts.push_back(path.string());
    }
    if (cfg.dump_dataset) {
        fs::path path = out_dir / "dataset.csv";
        auto out = open_out(path);
        ml::write_csv(sim.will_arrive().dataset(), out);
        result.artifacts.push_back(path.string());
    }
    return result;
}

}  // namespace enkit::harness
