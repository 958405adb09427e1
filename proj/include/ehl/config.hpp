#pragma once

#include "ehl/core_model.hpp"
#include "ehl/state_machine.hpp"

#include <cstdint>
#include <string>

namespace ehl {

/// Every tunable of the device model and the simulation loop. Shipped
/// defaults reproduce the reference record rate of ~2.15 Hz at 500 lux
/// (see the `calibrate` CLI subcommand).
struct DeviceConfig {
    CapacitorParams cap;
    HarvesterParams sc1{126e-6, 5913.0, 2.2, 5.0};
    HarvesterParams sc2{166e-6, 5913.0, 2.8, 800.0};
    PiezoParams piezo{0.400};
    PowerBudget budget;

    double cmp_power_fall = 2.0; // V
    double cmp_power_rise = 2.2; // V
    double cmp_mode_offset = 0.2; // V, mode thresholds sit this far above power's
    double v_cap_initial = 2.0;  // V, resting voltage of a long-dark device

    double l_ref = 1000.0;       // lux, open-circuit voltage normalization point

    double dt = 1e-3;            // s, fixed simulation step
    double trace_interval = 0.1; // s, power-trace sampling period
    double session_gap = 5.0;    // s of battery dwell that starts a new session
    std::uint64_t capacity_bytes = 32768; // EEPROM size (M95256 = 256 Kbit)
    std::uint64_t seed = 0;

    void validate() const;
};

/// Parses `key = value` lines; '#' starts a comment; values may carry unit
/// suffixes (47uF, 2.0V, 200uA, 20ms, 400mV/g). Unknown keys are rejected.
DeviceConfig parse_config(const std::string& text);
DeviceConfig load_config(const std::string& path);

/// Numeric value with an optional metric-prefixed unit suffix.
double parse_unit_value(const std::string& token);

} // namespace ehl
