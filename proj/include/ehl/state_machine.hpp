#pragma once

#include "ehl/core_model.hpp"

#include <cstdint>
#include <vector>

namespace ehl {

enum class PowerSource : std::uint8_t { Capacitor, Battery };
enum class McuMode : std::uint8_t { Sleep, Active };

enum class Event : std::uint8_t {
    RecordStarted,
    RecordTaken,
    SwitchedToCapacitor,
    SwitchedToBattery,
};

/// MCU current draw on the selected rail, per phase of the record cycle.
/// Requires i_led > i_active > i_sleep > 0 and t_record > 0.
struct PowerBudget {
    double i_sleep = 2e-6;   // A
    double i_active = 200e-6; // A
    double i_led = 2e-3;     // A, burn-off LED after the record completes
    double t_record = 0.020; // s, sensing + EEPROM write duration

    void validate() const;
};

/// Full device state: power rail selection, MCU mode, capacitor voltage and
/// the two hysteresis comparators. The mode comparator's thresholds sit a
/// positive offset above the power comparator's, so an active MCU always
/// implies the capacitor rail.
struct DeviceState {
    PowerSource power_source = PowerSource::Battery;
    McuMode mcu_mode = McuMode::Sleep;
    double v_cap = 0;
    HysteresisComparator cmp_power;
    HysteresisComparator cmp_mode;
    double active_elapsed = 0;      // s, time spent in the current active burst
    double battery_time_accum = 0;  // s, total time spent on the battery rail

    void validate() const;

    bool operator==(const DeviceState&) const = default;
};

/// Builds the initial state from comparator thresholds and a starting
/// capacitor voltage. Comparator outputs are initialized consistently
/// (high iff v0 >= their rising threshold).
DeviceState make_device_state(double power_fall, double power_rise, double mode_offset,
                              double v0);

/// Advances the proposed (two-comparator, dual power switch) device by dt.
/// The capacitor integrates harvest minus the MCU draw while the capacitor
/// rail is selected; on battery the capacitor only charges. Fired events are
/// appended to `events`. Returns the net capacitor current applied (A).
double device_step(DeviceState& s, double harvest, double dt, const PowerBudget& budget,
                   const CapacitorParams& cap, std::vector<Event>& events);

/// Advances the one-comparator baseline: the mode comparator drives both the
/// MCU mode and the power switch, so every recharge interval runs on battery.
double baseline_step(DeviceState& s, double harvest, double dt, const PowerBudget& budget,
                     const CapacitorParams& cap, std::vector<Event>& events);

} // namespace ehl
