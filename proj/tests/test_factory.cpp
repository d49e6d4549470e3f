#include <doctest.h>

#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "enkit/factory/sim.hpp"

using namespace enkit;
using factory::Phase;
using factory::Policy;
using factory::ScenarioConfig;

namespace {

// Degenerate randomness: zero bus delay makes every arrival exactly the bus
// offset, so timelines are checkable by hand.
ScenarioConfig no_delay_config() {
    ScenarioConfig cfg;
    cfg.delay_mean = 0.0;
    cfg.late_fraction = 0.0;
    return cfg;
}

core::PermissionSet full_access(const core::ComponentId& worker,
                                const core::ComponentId& workplace) {
    core::PermissionSet perms;
    perms.grants.insert({worker, factory::kGateResource, "enter"});
    perms.grants.insert({worker, factory::kDispenserResource, "use"});
    perms.grants.insert({worker, workplace, "enter"});
    return perms;
}

std::int64_t total(const factory::DayResult& r, std::int64_t factory::ShiftMetrics::*field) {
    std::int64_t sum = 0;
    for (const auto& s : r.shifts) sum += s.*field;
    return sum;
}

}  // namespace

TEST_CASE("zero-delay business arrivals are exactly the punctual bus offset") {
    ScenarioConfig cfg = no_delay_config();
    auto plan = factory::schedule_arrivals(cfg, 0);  // Monday
    core::TimeMin start = factory::shift_start(cfg, 0);
    REQUIRE(plan.arrival.size() == cfg.shifts_count);
    for (std::size_t s = 0; s < cfg.shifts_count; ++s) {
        REQUIRE(plan.arrival[s].size() == cfg.workers_per_shift);
        for (std::size_t w = 0; w < cfg.workers_per_shift; ++w) {
            CHECK(plan.arrival[s][w] == start - 24);
            CHECK(!plan.late[s][w]);
        }
    }
}

TEST_CASE("zero-delay weekend late bus arrives fifteen minutes before the start") {
    ScenarioConfig cfg = no_delay_config();
    cfg.late_fraction = 1.0;  // everyone rides it
    auto plan = factory::schedule_arrivals(cfg, 5);  // Saturday
    core::TimeMin start = factory::shift_start(cfg, 5);
    for (std::size_t s = 0; s < cfg.shifts_count; ++s)
        for (std::size_t w = 0; w < cfg.workers_per_shift; ++w) {
            CHECK(plan.arrival[s][w] == start - 15);
            CHECK(plan.late[s][w]);
        }
}

TEST_CASE("late-bus headcount is exactly the floor of the configured fraction") {
    ScenarioConfig cfg;
    cfg.workers_per_shift = 33;
    cfg.late_fraction = 0.10;  // floor(3.3) = 3
    auto plan = factory::schedule_arrivals(cfg, 1);
    for (std::size_t s = 0; s < cfg.shifts_count; ++s) {
        std::size_t late = 0;
        for (bool b : plan.late[s]) late += b;
        CHECK(late == 3);
    }
}

TEST_CASE("arrival schedules are deterministic in (seed, day) and vary across days") {
    ScenarioConfig cfg;
    cfg.seed = 7;
    auto a = factory::schedule_arrivals(cfg, 2);
    auto b = factory::schedule_arrivals(cfg, 2);
    CHECK(a.arrival == b.arrival);
    CHECK(a.late == b.late);

    auto c = factory::schedule_arrivals(cfg, 3);
    // same day-of-week class, different stream: delays should not repeat
    bool any_diff = false;
    for (std::size_t s = 0; s < cfg.shifts_count && !any_diff; ++s)
        for (std::size_t w = 0; w < cfg.workers_per_shift; ++w)
            if (a.arrival[s][w] - factory::shift_start(cfg, 2) !=
                c.arrival[s][w] - factory::shift_start(cfg, 3)) {
                any_diff = true;
                break;
            }
    CHECK(any_diff);
}

TEST_CASE("a worker without a gate grant waits at the gate indefinitely") {
    ScenarioConfig cfg;
    factory::WorkerSim w{"w", 0, false, Phase::AtHome, 100, 0, std::nullopt, false};
    core::PermissionSet none;
    for (core::TimeMin t = 99; t < 160; ++t) factory::step_worker(w, none, t, cfg, "wp");
    CHECK(w.phase == Phase::Traveling);
    CHECK(!w.workplace_arrival.has_value());
}

TEST_CASE("a fully permitted worker walks gate to workplace in five minutes") {
    ScenarioConfig cfg;
    factory::WorkerSim w{"w", 0, false, Phase::AtHome, 100, 0, std::nullopt, false};
    auto perms = full_access("w", "wp");
    for (core::TimeMin t = 95; t <= 105; ++t) factory::step_worker(w, perms, t, cfg, "wp");
    CHECK(w.phase == Phase::AtWorkplace);
    REQUIRE(w.workplace_arrival.has_value());
    CHECK(*w.workplace_arrival == 105);  // gate at 100, +2 dispenser, +3 workplace
}

TEST_CASE("the workplace door stays shut without the headgear leg") {
    ScenarioConfig cfg;
    factory::WorkerSim w{"w", 0, false, Phase::AtHome, 100, 0, std::nullopt, false};
    core::PermissionSet perms;
    perms.grants.insert({"w", factory::kGateResource, "enter"});
    perms.grants.insert({"w", "wp", "enter"});  // no dispenser use
    for (core::TimeMin t = 95; t <= 140; ++t) factory::step_worker(w, perms, t, cfg, "wp");
    CHECK(w.phase == Phase::AtFactory);
    CHECK(!w.workplace_arrival.has_value());
}

TEST_CASE("a called standby reaches the workplace thirty-five minutes later") {
    ScenarioConfig cfg;
    factory::WorkerSim s{"s", 0, true, Phase::StandbyIdle, 0, 0, std::nullopt, false};
    factory::apply_called_in(s, 200, cfg);
    CHECK(s.phase == Phase::StandbyTraveling);
    CHECK(s.gate_arrival == 230);
    auto perms = full_access("s", "wp");
    for (core::TimeMin t = 200; t <= 240; ++t) factory::step_worker(s, perms, t, cfg, "wp");
    REQUIRE(s.workplace_arrival.has_value());
    CHECK(*s.workplace_arrival == 235);
}

TEST_CASE("cancellation is absorbing and only lands on a worker still outside") {
    ScenarioConfig cfg;
    factory::WorkerSim w{"w", 0, false, Phase::AtFactory, 100, 102, std::nullopt, false};
    factory::apply_canceled(w);
    CHECK(w.phase == Phase::AtFactory);  // already inside: unaffected

    factory::WorkerSim h{"h", 0, false, Phase::Traveling, 100, 0, std::nullopt, false};
    factory::apply_canceled(h);
    CHECK(h.phase == Phase::Canceled);
    factory::apply_called_in(h, 120, cfg);  // not a standby call target either
    auto perms = full_access("h", "wp");
    for (core::TimeMin t = 120; t <= 160; ++t) factory::step_worker(h, perms, t, cfg, "wp");
    CHECK(h.phase == Phase::Canceled);
}

TEST_CASE("a clean zero-delay day cancels nobody and accrues no lateness") {
    ScenarioConfig cfg = no_delay_config();
    cfg.workers_per_shift = 12;
    cfg.standbys_per_shift = 4;
    factory::FactorySim sim(cfg);
    auto r = sim.run_day(0, Policy::Rigid);
    REQUIRE(r.shifts.size() == cfg.shifts_count);
    CHECK(total(r, &factory::ShiftMetrics::canceled) == 0);
    CHECK(total(r, &factory::ShiftMetrics::standbys_called) == 0);
    CHECK(total(r, &factory::ShiftMetrics::lateness) == 0);
    CHECK(!r.access_violation);
    CHECK(!r.duplicate_standby);
    CHECK(r.infeasible_ticks == 0);
}

TEST_CASE("gate opens no earlier than thirty minutes before the start") {
    ScenarioConfig cfg = no_delay_config();
    cfg.shifts_count = 1;
    cfg.workers_per_shift = 3;
    cfg.standbys_per_shift = 1;
    cfg.bus_offset_business = -45;  // at the gate well before the access window
    factory::FactorySim sim(cfg);
    core::TimeMin start = factory::shift_start(cfg, 0);

    core::TimeMin first_grant = -1;
    sim.tick_probe = [&](core::TimeMin now, const core::StepResult& res) {
        if (first_grant < 0 && res.permissions.allows("w-1-000", factory::kGateResource, "enter"))
            first_grant = now;
    };
    auto r = sim.run_day(0, Policy::Rigid);
    CHECK(first_grant == start - 30);
    CHECK(total(r, &factory::ShiftMetrics::canceled) == 0);
    CHECK(total(r, &factory::ShiftMetrics::lateness) == 0);
}

TEST_CASE("one missed bus costs one cancellation, one standby, and 361 lateness") {
    // Weekend, zero delay: nine punctual workers arrive at start-30; the one
    // late-bus worker would arrive at start-15, inside the cutoff, so the
    // rigid rule cancels at start-16 and the replacement reaches the
    // workplace at start+19.
    ScenarioConfig cfg = no_delay_config();
    cfg.shifts_count = 1;
    cfg.workers_per_shift = 10;
    cfg.standbys_per_shift = 2;
    cfg.late_fraction = 0.10;
    factory::FactorySim sim(cfg);
    auto r = sim.run_day(5, Policy::Rigid);  // Saturday
    REQUIRE(r.shifts.size() == 1);
    CHECK(r.shifts[0].canceled == 1);
    CHECK(r.shifts[0].standbys_called == 1);
    CHECK(r.shifts[0].lateness == 19 * 19);
    CHECK(!r.access_violation);
    CHECK(r.infeasible_ticks == 0);
}

TEST_CASE("every cancellation is matched by one standby when the pool suffices") {
    ScenarioConfig cfg;
    cfg.shifts_count = 3;
    cfg.workers_per_shift = 20;
    cfg.standbys_per_shift = 20;  // full cover
    cfg.late_fraction = 0.20;
    cfg.delay_mean = 2.0;
    cfg.seed = 11;
    factory::FactorySim sim(cfg);
    auto r = sim.run_day(0, Policy::Rigid);
    CHECK(total(r, &factory::ShiftMetrics::canceled) > 0);
    for (const auto& s : r.shifts) {
        CHECK(s.standbys_called == s.canceled);
        CHECK(s.standbys_called <= static_cast<std::int64_t>(cfg.standbys_per_shift));
    }
    CHECK(!r.duplicate_standby);
    CHECK(!r.access_violation);
    CHECK(r.infeasible_ticks == 0);
}

TEST_CASE("an empty standby pool shows up as infeasible ticks, not as phantom calls") {
    ScenarioConfig cfg = no_delay_config();
    cfg.shifts_count = 1;
    cfg.workers_per_shift = 10;
    cfg.standbys_per_shift = 0;
    cfg.late_fraction = 0.50;  // five late-bus riders, all canceled on a weekend
    factory::FactorySim sim(cfg);
    auto r = sim.run_day(6, Policy::Rigid);  // Sunday
    CHECK(r.shifts[0].canceled == 5);
    CHECK(r.shifts[0].standbys_called == 0);
    CHECK(r.infeasible_ticks > 0);
}

TEST_CASE("full days are deterministic given the seed") {
    ScenarioConfig cfg;
    cfg.shifts_count = 2;
    cfg.workers_per_shift = 15;
    cfg.standbys_per_shift = 8;
    cfg.seed = 42;
    cfg.delay_mean = 4.0;
    cfg.late_fraction = 0.20;

    auto run = [&] {
        factory::FactorySim sim(cfg);
        std::vector<std::int64_t> out;
        for (std::int64_t day : {0, 5}) {
            auto r = sim.run_day(day, Policy::Rigid);
            for (const auto& s : r.shifts) {
                out.push_back(s.standbys_called);
                out.push_back(s.canceled);
                out.push_back(s.lateness);
            }
        }
        return out;
    };
    CHECK(run() == run());
}

TEST_CASE("untrained learned policy answers every query through the rigid rule") {
    ScenarioConfig cfg;
    cfg.shifts_count = 1;
    cfg.workers_per_shift = 10;
    cfg.standbys_per_shift = 6;
    cfg.late_fraction = 0.20;
    cfg.delay_mean = 3.0;
    factory::FactorySim sim(cfg);

    auto rigid = sim.run_day(0, Policy::Rigid);
    factory::FactorySim sim2(cfg);
    auto ml = sim2.run_day(0, Policy::Ml);

    CHECK(ml.ml_fallback_ticks > 0);
    // same decisions while the fallback is in force
    CHECK(ml.shifts[0].canceled == rigid.shifts[0].canceled);
    CHECK(ml.shifts[0].standbys_called == rigid.shifts[0].standbys_called);
    CHECK(ml.shifts[0].lateness == rigid.shifts[0].lateness);
}

TEST_CASE("a day of snapshots yields a linked dataset for the arrival estimate") {
    ScenarioConfig cfg;
    cfg.shifts_count = 1;
    cfg.workers_per_shift = 8;
    cfg.standbys_per_shift = 4;
    cfg.late_fraction = 0.25;
    cfg.delay_mean = 5.0;
    factory::FactorySim sim(cfg);
    sim.run_day(0, Policy::Rigid);

    const auto& est = sim.will_arrive();
    CHECK(est.dataset().size() > 0);
    CHECK(est.input_dim() == 8);  // horizon + day-of-week one-hot
    // labels are the factory-presence bit: all zero or one
    for (std::size_t i = 0; i < est.dataset().size(); ++i) {
        double y = est.dataset().labels[i];
        CHECK((y == 0.0 || y == 1.0));
    }
    CHECK(!est.trained());
}

TEST_CASE("default-size days fit the wall-clock budget") {
    ScenarioConfig cfg;  // 3 x 100 workers, 60 standbys
    cfg.seed = 3;
    factory::FactorySim sim(cfg);

    auto t0 = std::chrono::steady_clock::now();
    auto rigid = sim.run_day(0, Policy::Rigid);
    auto t1 = std::chrono::steady_clock::now();
    auto ml = sim.run_day(1, Policy::Ml);
    auto t2 = std::chrono::steady_clock::now();

    CHECK(total(rigid, &factory::ShiftMetrics::canceled) > 0);
    CHECK(ml.ml_fallback_ticks > 0);

    auto ms = [](auto a, auto b) {
        return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
    };
    MESSAGE("rigid day: " << ms(t0, t1) << " ms, learned day: " << ms(t1, t2) << " ms");
    CHECK(ms(t0, t1) < 60000);
    CHECK(ms(t1, t2) < 60000);
}
