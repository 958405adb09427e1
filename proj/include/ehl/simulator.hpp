#pragma once

#include "ehl/config.hpp"
#include "ehl/recorder.hpp"
#include "ehl/scenario.hpp"
#include "ehl/state_machine.hpp"

#include <string>
#include <vector>

namespace ehl {

enum class RunMode { Proposed, Baseline };

struct TraceEntry {
    double t = 0;
    PowerSource power_source = PowerSource::Battery;
    McuMode mcu_mode = McuMode::Sleep;
    double v_cap = 0;
};

/// Power-source occupancy sampled every `interval` seconds.
struct PowerTrace {
    std::vector<TraceEntry> entries;
    double interval = 0.1;
};

struct ZeroEnergyReport {
    double zero_energy_time = 0; // s on the capacitor rail
    double battery_time = 0;     // s on the battery rail
    double zero_energy_rate = 0; // fraction in [0,1]
};

struct RunResult {
    RecordLog log;
    PowerTrace trace;
    std::uint64_t dropped_samples = 0; // rejected by a full log
    double charge_integral_c = 0;      // integral of i_net dt over the run
    double initial_v_cap = 0;
    double final_v_cap = 0;
    double battery_time = 0;           // from the device accumulator
};

/// Runs the device over the scenario at fixed steps of cfg.dt. Each completed
/// record cycle appends a sample (RTC time + the three sensed voltages); a new
/// session begins after any battery stretch of at least cfg.session_gap.
RunResult run(const Scenario& sc, const DeviceConfig& cfg, RunMode mode);

/// Integrates per-source dwell over the trace (each entry covers one interval).
ZeroEnergyReport zero_energy_rate(const PowerTrace& trace);

/// CSV `t_s,power_source,mcu_mode,v_cap`, sources {capacitor,battery},
/// modes {sleep,active}.
std::string trace_to_csv(const PowerTrace& trace);
PowerTrace trace_from_csv(const std::string& text);

/// Ground-truth label timeline as CSV `t_s,place,activity`, one row per
/// segment start; labels hold until the next row.
std::string scenario_truth_csv(const Scenario& sc);

} // namespace ehl
