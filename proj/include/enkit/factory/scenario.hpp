#pragma once

#include <cstdint>

#include "enkit/core/value.hpp"

namespace enkit::factory {

enum class Policy { Rigid, Ml };

constexpr const char* to_string(Policy p) { return p == Policy::Rigid ? "rigid" : "ml"; }

// Knobs of the shift scenario. Times are minutes; bus offsets are negative
// (before shift start), standby travel is positive.
struct ScenarioConfig {
    std::size_t shifts_count = 3;
    std::size_t workers_per_shift = 100;
    std::size_t standbys_per_shift = 60;  // sized to cover worst-case demand at late_fraction 0.30
    bool global_standbys = false;         // one shared standby pool instead of per-shift pools

    double late_fraction = 0.10;  // exactly floor(fraction * workers) ride the late bus

    int bus_offset_business = -24;
    int bus_offset_weekend = -30;
    int late_bus_business = -18;
    int late_bus_weekend = -15;
    double delay_mean = 5.0;  // exponential delay added to the bus offset

    int standby_travel_time = 30;
    int rigid_cutoff = 16;  // cancel workers absent this close to the start

    int gate_to_dispenser = 2;
    int dispenser_to_workplace = 3;

    int shift_start_minute = 480;
    int shift_length = 480;
    int day_margin = 60;       // simulate from start - margin to end + margin
    int collection_lead = 36;  // estimate snapshots begin this early before the start

    std::uint64_t seed = 0;
};

// Day 0 is a Monday; days 5 and 6 are the weekend.
inline int day_of_week(std::int64_t day) { return static_cast<int>(((day % 7) + 7) % 7); }
inline bool is_weekend(std::int64_t day) { return day_of_week(day) >= 5; }

inline core::TimeMin day_base(std::int64_t day) { return day * 1440; }
inline core::TimeMin shift_start(const ScenarioConfig& cfg, std::int64_t day) {
    return day_base(day) + cfg.shift_start_minute;
}
inline core::TimeMin shift_end(const ScenarioConfig& cfg, std::int64_t day) {
    return shift_start(cfg, day) + cfg.shift_length;
}

inline int bus_offset(const ScenarioConfig& cfg, std::int64_t day, bool late) {
    if (is_weekend(day)) return late ? cfg.late_bus_weekend : cfg.bus_offset_weekend;
    return late ? cfg.late_bus_business : cfg.bus_offset_business;
}

}  // namespace enkit::factory
