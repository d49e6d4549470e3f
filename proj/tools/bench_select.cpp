// Timing harness for the exclusive-selection heuristic: greedy policy vs the
// exact augmenting-path fallback on randomly generated contention problems.
// Prints one row per problem size; wall time is the mean over --reps runs.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "enkit/core/rng.hpp"
#include "enkit/heur/selection.hpp"

namespace {

using enkit::heur::SelectionProblem;

// n instances with demand 1..3, candidates sized so total supply is roughly
// `ratio` times total demand, each candidate eligible for `degree` instances.
SelectionProblem scaled_problem(std::size_t n, double ratio, std::size_t degree,
                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SelectionProblem p;
    std::size_t total_demand = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t demand = 1 + enkit::core::uniform_below(rng, 3);
        total_demand += demand;
        p.instances.push_back({"inst-" + std::to_string(i), demand});
    }
    std::size_t m = static_cast<std::size_t>(static_cast<double>(total_demand) * ratio) + 1;
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = p.instances[i].id;
    for (std::size_t c = 0; c < m; ++c) {
        enkit::core::seeded_shuffle(ids, rng);
        std::size_t deg = std::min(degree, n);
        std::vector<std::string> eligible(ids.begin(),
                                          ids.begin() + static_cast<std::ptrdiff_t>(deg));
        p.candidates.push_back({"cand-" + std::to_string(c), std::move(eligible),
                                enkit::core::uniform01(rng) * 2.0});
    }
    return p;
}

template <typename Fn>
double mean_micros(Fn&& fn, int reps) {
    auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::micro>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exclusive-selection timing: greedy policy vs exact matching"};
    std::vector<std::size_t> sizes{10, 30, 100, 300, 1000};
    double ratio = 1.3;
    std::size_t degree = 4;
    int reps = 20;
    std::uint64_t seed = 1;
    app.add_option("--sizes", sizes, "instance counts to benchmark");
    app.add_option("--ratio", ratio, "candidate supply / total demand");
    app.add_option("--degree", degree, "eligible instances per candidate");
    app.add_option("--reps", reps, "repetitions per size");
    app.add_option("--seed", seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    std::printf("%8s %10s %10s %12s %12s %9s %9s\n", "insts", "cands", "slots",
                "greedy_us", "exact_us", "g_feas", "e_feas");
    for (std::size_t n : sizes) {
        auto p = scaled_problem(n, ratio, degree, enkit::core::derive_seed(seed, n));
        std::size_t slots = 0;
        for (const auto& inst : p.instances) slots += inst.demand;
        bool g_feas = false;
        bool e_feas = false;
        double g_us = mean_micros(
            [&] { g_feas = enkit::heur::exclusive_select(p).has_value(); }, reps);
        double e_us = mean_micros(
            [&] { e_feas = enkit::heur::exclusive_select_exact(p).has_value(); }, reps);
        std::printf("%8zu %10zu %10zu %12.1f %12.1f %9s %9s\n", n, p.candidates.size(),
                    slots, g_us, e_us, g_feas ? "yes" : "no", e_feas ? "yes" : "no");
    }
    return 0;
}
