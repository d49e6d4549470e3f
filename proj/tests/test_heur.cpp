#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "enkit/core/rng.hpp"
#include "enkit/heur/kmeans.hpp"
#include "enkit/heur/partition.hpp"
#include "enkit/heur/selection.hpp"
#include "oracles/kmeans_oracle.hpp"
#include "oracles/selection_gen.hpp"
#include "oracles/selection_oracle.hpp"

using namespace enkit;
using oracles::random_selection_problem;

TEST_CASE("exclusive selection: zero demand yields empty assignment") {
    heur::SelectionProblem p;
    p.instances = {{"a", 0}, {"b", 0}};
    p.candidates = {{"c1", {"a", "b"}, 0.0}};
    auto a = heur::exclusive_select(p);
    REQUIRE(a.has_value());
    CHECK(a->at("a").empty());
    CHECK(a->at("b").empty());
}

TEST_CASE("exclusive selection: demand beyond shared supply is infeasible") {
    heur::SelectionProblem p;
    p.instances = {{"a", 2}, {"b", 2}};
    p.candidates = {{"c1", {"a", "b"}, 0.0}, {"c2", {"a", "b"}, 0.0}, {"c3", {"a", "b"}, 0.0}};
    CHECK_FALSE(heur::exclusive_select(p).has_value());
    CHECK_FALSE(heur::exclusive_select_exact(p).has_value());
}

TEST_CASE("exclusive selection: malformed problems are rejected") {
    heur::SelectionProblem p;
    p.instances = {{"a", 1}, {"a", 1}};
    CHECK_THROWS_AS(heur::exclusive_select(p), std::invalid_argument);
    p.instances = {{"a", 1}};
    p.candidates = {{"c1", {}, 0.0}};
    CHECK_THROWS_AS(heur::exclusive_select(p), std::invalid_argument);
    p.candidates = {{"c1", {"nope"}, 0.0}};
    CHECK_THROWS_AS(heur::exclusive_select(p), std::invalid_argument);
}

TEST_CASE("exclusive selection: cheaper candidates are preferred") {
    heur::SelectionProblem p;
    p.instances = {{"a", 1}};
    p.candidates = {{"c1", {"a"}, 5.0}, {"c2", {"a"}, 1.0}};
    auto a = heur::exclusive_select(p);
    REQUIRE(a.has_value());
    CHECK(a->at("a") == std::vector<std::string>{"c2"});
}

TEST_CASE("exclusive selection: every returned assignment is valid, greedy covers oracle-feasible problems") {
    std::size_t feasible = 0, greedy_ok = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto p = random_selection_problem(core::derive_seed(42, seed));
        auto greedy = heur::exclusive_select(p);
        if (greedy) {
            CHECK(oracles::assignment_valid(p, *greedy));
            // determinism: same problem, same answer
            CHECK(*heur::exclusive_select(p) == *greedy);
        }
        auto exact = heur::exclusive_select_exact(p);
        if (exact) CHECK(oracles::assignment_valid(p, *exact));
        bool oracle = oracles::selection_feasible(p);
        CHECK(exact.has_value() == oracle);  // exact policy is complete
        if (greedy) CHECK(oracle);           // greedy success implies feasible
        if (oracle) {
            ++feasible;
            if (greedy) ++greedy_ok;
        }
    }
    REQUIRE(feasible > 0);
    CAPTURE(feasible);
    CAPTURE(greedy_ok);
    CHECK(static_cast<double>(greedy_ok) >= 0.9 * static_cast<double>(feasible));
}

TEST_CASE("partition: single instance absorbs everything") {
    auto m = heur::partition({"x", "y"}, {"e1"}, [](auto&, auto&) { return 0.0; });
    CHECK(m.at("x") == "e1");
    CHECK(m.at("y") == "e1");
}

TEST_CASE("partition: uniform affinity balances 2+2") {
    auto m = heur::partition({"c1", "c2", "c3", "c4"}, {"e1", "e2"},
                             [](auto&, auto&) { return 1.0; });
    std::size_t e1 = 0, e2 = 0;
    for (auto& [c, e] : m) (e == "e1" ? e1 : e2)++;
    CHECK(e1 == 2);
    CHECK(e2 == 2);
}

TEST_CASE("partition: nearest instance on a line wins") {
    std::map<std::string, double> pos{{"c1", 1}, {"c2", 2}, {"c8", 8}, {"c9", 9},
                                      {"e0", 0}, {"e10", 10}};
    auto aff = [&](const std::string& c, const std::string& e) {
        return -std::abs(pos.at(c) - pos.at(e));
    };
    auto m = heur::partition({"c1", "c2", "c8", "c9"}, {"e0", "e10"}, aff);
    CHECK(m.at("c1") == "e0");
    CHECK(m.at("c2") == "e0");
    CHECK(m.at("c8") == "e10");
    CHECK(m.at("c9") == "e10");

    // exhaustive check: no other of the 16 assignments beats it on total affinity
    double got = 0;
    for (auto& [c, e] : m) got += aff(c, e);
    std::vector<std::string> comps{"c1", "c2", "c8", "c9"};
    for (std::size_t mask = 0; mask < 16; ++mask) {
        double total = 0;
        for (std::size_t i = 0; i < 4; ++i)
            total += aff(comps[i], (mask >> i) & 1 ? "e10" : "e0");
        CHECK(got >= total - 1e-12);
    }
}

TEST_CASE("partition: empty instance list is an error") {
    CHECK_THROWS_AS(heur::partition({"x"}, {}, [](auto&, auto&) { return 0.0; }),
                    std::invalid_argument);
}

TEST_CASE("kmeans: k equal to point count gives zero inertia") {
    std::vector<std::vector<double>> pts{{0, 0}, {1, 0}, {5, 5}, {9, 1}};
    auto r = heur::kmeans(pts, pts.size(), 7);
    CHECK(r.inertia == doctest::Approx(0.0));
    std::set<std::size_t> labels(r.labels.begin(), r.labels.end());
    CHECK(labels.size() == pts.size());
}

TEST_CASE("kmeans: identical points collapse to zero inertia for any k") {
    std::vector<std::vector<double>> pts(6, {3.0, -2.0});
    for (std::size_t k : {1u, 2u, 5u}) {
        auto r = heur::kmeans(pts, k, 11);
        CHECK(r.inertia == doctest::Approx(0.0));
    }
}

TEST_CASE("kmeans: k greater than n is rejected") {
    std::vector<std::vector<double>> pts{{0.0}, {1.0}};
    CHECK_THROWS_AS(heur::kmeans(pts, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(heur::kmeans(pts, 0, 1), std::invalid_argument);
}

TEST_CASE("kmeans: three separated blobs are recovered at the optimal inertia") {
    // blob radius <= 0.5, separations >= 10x that
    std::vector<std::vector<double>> pts{
        {0.0, 0.0},  {0.5, 0.0},  {0.0, 0.5},  {0.3, 0.3},    // blob 0
        {20.0, 0.0}, {20.5, 0.0}, {20.0, 0.5}, {20.3, 0.3},   // blob 1
        {0.0, 20.0}, {0.5, 20.0}, {0.0, 20.5}, {0.3, 20.3}};  // blob 2
    double optimal = oracles::optimal_inertia(pts, 3);
    auto r = heur::kmeans(pts, 3, 3);
    CHECK(r.inertia == doctest::Approx(optimal).epsilon(1e-9));
    for (std::size_t blob = 0; blob < 3; ++blob)
        for (std::size_t i = 1; i < 4; ++i)
            CHECK(r.labels[4 * blob + i] == r.labels[4 * blob]);
    CHECK(r.labels[0] != r.labels[4]);
    CHECK(r.labels[4] != r.labels[8]);
    CHECK(r.labels[0] != r.labels[8]);
}

TEST_CASE("kmeans: inertia history never increases") {
    std::mt19937_64 rng(core::mix64(99));
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < 60; ++i)
        pts.push_back({core::uniform01(rng) * 10, core::uniform01(rng) * 10});
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto r = heur::kmeans(pts, 4, seed);
        for (std::size_t i = 1; i < r.inertia_history.size(); ++i)
            CHECK(r.inertia_history[i] <= r.inertia_history[i - 1] + 1e-9);
        auto again = heur::kmeans(pts, 4, seed);
        CHECK(again.labels == r.labels);
        CHECK(again.inertia == r.inertia);
    }
}
