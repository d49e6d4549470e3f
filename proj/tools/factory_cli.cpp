// Command-line front end: `run` executes a configured multi-week experiment,
// `boundary` re-derives the cancellation boundary from a saved checkpoint,
// `oracle-check` replays the brute-force differential suites.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "enkit/harness/experiment.hpp"
#include "oracles/model_gen.hpp"
#include "oracles/resolve_oracle.hpp"
#include "oracles/script_gen.hpp"
#include "oracles/selection_gen.hpp"
#include "oracles/selection_oracle.hpp"

using namespace enkit;

namespace {

struct WeekAgg {
    std::string policy;
    double standbys = 0, canceled = 0, lateness = 0;
    std::size_t rows = 0;
};

int cmd_run(const std::string& config_path, const std::vector<std::string>& sets,
            const std::map<std::string, std::string>& flag_values) {
    harness::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = harness::parse_config_file(config_path);
    for (const auto& kv : sets) {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw harness::ConfigError("--set expects key=value, got '" + kv + "'");
        harness::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [key, value] : flag_values) harness::apply_override(cfg, key, value);

    auto result = harness::run_experiment(cfg);

    std::map<std::size_t, WeekAgg> weeks;
    for (const auto& row : result.rows) {
        auto& agg = weeks[row.week];
        agg.policy = row.policy;
        agg.standbys += static_cast<double>(row.standbys_called);
        agg.canceled += static_cast<double>(row.canceled);
        agg.lateness += static_cast<double>(row.lateness);
        ++agg.rows;
    }
    for (const auto& [week, agg] : weeks) {
        double n = static_cast<double>(agg.rows);
        std::cout << "week " << week << " (" << agg.policy << "): per shift-day standbys "
                  << agg.standbys / n << ", canceled " << agg.canceled / n << ", lateness "
                  << agg.lateness / n << "\n";
    }
    if (result.boundary)
        std::cout << "boundary cutoffs: business " << result.boundary->business_cutoff
                  << " min, weekend " << result.boundary->weekend_cutoff << " min\n";
    if (result.infeasible_ticks)
        std::cout << "replacement infeasible on " << result.infeasible_ticks << " ticks\n";
    for (const auto& path : result.artifacts) std::cout << "wrote " << path << "\n";

    if (result.access_violation || result.duplicate_standby) {
        std::cerr << "error: audit failed:" << (result.access_violation ? " access-violation" : "")
                  << (result.duplicate_standby ? " duplicate-standby" : "") << "\n";
        return 1;
    }
    return 0;
}

int cmd_boundary(const std::string& checkpoint, const std::string& out_csv) {
    std::ifstream in(checkpoint);
    if (!in) {
        std::cerr << "error: cannot open checkpoint '" << checkpoint << "'\n";
        return 1;
    }
    ml::Estimator model = ml::Estimator::load(in);
    auto dump = harness::dump_boundary(
        [&model](int d, int o) { return harness::will_arrive_probability(model, d, o); });
    std::ofstream out(out_csv);
    if (!out) {
        std::cerr << "error: cannot write '" << out_csv << "'\n";
        return 1;
    }
    harness::write_boundary_csv(dump, out);
    std::cout << "boundary cutoffs: business " << dump.business_cutoff << " min, weekend "
              << dump.weekend_cutoff << " min\n";
    std::cout << "wrote " << out_csv << "\n";
    return 0;
}

int suite_resolve(std::size_t cases, std::uint64_t seed) {
    for (std::uint64_t i = 0; i < cases; ++i) {
        auto model = oracles::random_model(core::derive_seed(seed, i));
        core::Resolver resolver(model->registry);
        for (const auto& t : model->ensembles) resolver.register_ensemble_type(t);
        for (core::TimeMin now : {0, 2, 5}) {
            auto got = resolver.resolve(*model->pop, now);
            std::set<std::string> got_canon;
            for (const auto& inst : got.instances)
                got_canon.insert(inst.identity + "|" + oracles::canon_binding(inst.dynamics));
            auto want = oracles::brute_force_resolve(model->ensembles, *model->pop, now);
            if (got_canon != want) {
                std::cerr << "error: resolve mismatch at case " << i << ", step " << now << "\n";
                return 1;
            }
        }
    }
    std::cout << "resolve: " << cases << " random models x 3 steps match the enumeration\n";
    return 0;
}

int suite_selection(std::size_t cases, std::uint64_t seed) {
    std::size_t feasible = 0, greedy_ok = 0;
    for (std::uint64_t i = 0; i < cases; ++i) {
        auto p = oracles::random_selection_problem(core::derive_seed(seed, i));
        auto greedy = heur::exclusive_select(p);
        auto exact = heur::exclusive_select_exact(p);
        bool oracle = oracles::selection_feasible(p);
        if (greedy && !oracles::assignment_valid(p, *greedy)) {
            std::cerr << "error: greedy produced an invalid assignment at case " << i << "\n";
            return 1;
        }
        if (exact && !oracles::assignment_valid(p, *exact)) {
            std::cerr << "error: exact produced an invalid assignment at case " << i << "\n";
            return 1;
        }
        if (exact.has_value() != oracle) {
            std::cerr << "error: exact feasibility disagrees with the oracle at case " << i
                      << "\n";
            return 1;
        }
        if (greedy && !oracle) {
            std::cerr << "error: greedy solved an infeasible problem at case " << i << "\n";
            return 1;
        }
        feasible += oracle;
        greedy_ok += (oracle && greedy.has_value());
    }
    std::cout << "selection: " << cases << " problems, " << feasible << " feasible, greedy solved "
              << greedy_ok << "\n";
    return 0;
}

int suite_dataset(std::size_t cases, std::uint64_t seed) {
    for (std::uint64_t i = 0; i < cases; ++i) {
        auto run = oracles::random_script_run(core::derive_seed(seed, i));
        auto want = oracles::dataset_by_nested_loop(run->trace, run->script_.min_t,
                                                    run->script_.max_t);
        if (!oracles::datasets_equal(run->estimate.dataset(), want)) {
            std::cerr << "error: collected dataset differs from the nested-loop oracle at case "
                      << i << "\n";
            return 1;
        }
    }
    std::cout << "dataset: " << cases << " random traces match the nested-loop oracle\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ensemble-based shift staffing: simulation and analysis"};
    app.require_subcommand(1);

    std::string config_path, out_dir, policy_schedule, checkpoint, boundary_out, suite;
    std::uint64_t seed = 0;
    std::size_t weeks = 0, cases = 200;
    double late_fraction = 0.0;
    std::vector<std::string> sets;
    bool dump_dataset = false, verbose = false;

    auto* run = app.add_subcommand("run", "Run a multi-week staffing experiment");
    auto* opt_config = run->add_option("--config", config_path, "Flat key-value config file");
    auto* opt_seed = run->add_option("--seed", seed, "Master seed");
    auto* opt_weeks = run->add_option("--weeks", weeks, "Number of weeks");
    auto* opt_lf = run->add_option("--late-fraction", late_fraction, "Late-bus fraction in [0,1]");
    auto* opt_sched = run->add_option("--policy-schedule", policy_schedule,
                                      "Comma-separated week policies, e.g. rigid,ml");
    auto* opt_out = run->add_option("--out", out_dir, "Output directory");
    run->add_option("--set", sets, "Any config key as key=value (repeatable)");
    auto* opt_dump = run->add_flag("--dump-dataset", dump_dataset, "Also write dataset.csv");
    auto* opt_verbose = run->add_flag("--verbose", verbose, "Write per-tick trace.txt");

    auto* boundary = app.add_subcommand("boundary", "Boundary grid from a saved checkpoint");
    boundary->add_option("--checkpoint", checkpoint, "estimator-week<k>.ckpt path")->required();
    boundary->add_option("--out", boundary_out, "Output CSV path")->required();

    auto* oracle = app.add_subcommand("oracle-check", "Differential checks against oracles");
    oracle->add_option("--suite", suite, "resolve | selection | dataset")->required();
    oracle->add_option("--cases", cases, "Number of random cases");
    oracle->add_option("--seed", seed, "Case-generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            // named flags win over both the file and --set pairs
            std::map<std::string, std::string> flags;
            if (opt_seed->count()) flags["seed"] = std::to_string(seed);
            if (opt_weeks->count()) flags["weeks"] = std::to_string(weeks);
            if (opt_lf->count()) flags["late_fraction"] = std::to_string(late_fraction);
            if (opt_sched->count()) flags["policy_schedule"] = policy_schedule;
            if (opt_out->count()) flags["out_dir"] = out_dir;
            if (opt_dump->count()) flags["dump_dataset"] = "true";
            if (opt_verbose->count()) flags["verbose"] = "true";
            return cmd_run(opt_config->count() ? config_path : "", sets, flags);
        }
        if (boundary->parsed()) return cmd_boundary(checkpoint, boundary_out);
        if (suite == "resolve") return suite_resolve(cases, seed);
        if (suite == "selection") return suite_selection(cases, seed);
        if (suite == "dataset") return suite_dataset(cases, seed);
        std::cerr << "error: unknown suite '" << suite << "' (resolve | selection | dataset)\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
