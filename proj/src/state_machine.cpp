#include "ehl/state_machine.hpp"

#include <cmath>
#include <stdexcept>

namespace ehl {

void PowerBudget::validate() const {
    if (!(i_sleep > 0)) throw std::invalid_argument("i_sleep must be > 0");
    if (!(i_active > i_sleep)) throw std::invalid_argument("i_active must be > i_sleep");
    if (!(i_led > i_active)) throw std::invalid_argument("i_led must be > i_active");
    if (!(t_record > 0)) throw std::invalid_argument("t_record must be > 0");
}

void DeviceState::validate() const {
    cmp_power.validate();
    cmp_mode.validate();
    double off_rise = cmp_mode.v_rise - cmp_power.v_rise;
    double off_fall = cmp_mode.v_fall - cmp_power.v_fall;
    if (!(off_rise > 0) || !(off_fall > 0))
        throw std::invalid_argument("mode thresholds must sit above power thresholds");
    if (std::abs(off_rise - off_fall) > 1e-12)
        throw std::invalid_argument("mode thresholds must share one offset");
    if (mcu_mode == McuMode::Active && power_source != PowerSource::Capacitor)
        throw std::invalid_argument("active MCU requires the capacitor rail");
}

DeviceState make_device_state(double power_fall, double power_rise, double mode_offset,
                              double v0) {
    if (!(mode_offset > 0)) throw std::invalid_argument("mode_offset must be > 0");
    DeviceState s;
    s.cmp_power = {power_rise, power_fall, v0 >= power_rise};
    s.cmp_mode = {power_rise + mode_offset, power_fall + mode_offset,
                  v0 >= power_rise + mode_offset};
    s.v_cap = v0;
    s.power_source = s.cmp_power.output ? PowerSource::Capacitor : PowerSource::Battery;
    s.mcu_mode = s.cmp_mode.output ? McuMode::Active : McuMode::Sleep;
    s.validate();
    return s;
}

namespace {

double mcu_draw(const DeviceState& s, const PowerBudget& budget) {
    if (s.mcu_mode != McuMode::Active) return budget.i_sleep;
    double draw = budget.i_active;
    if (s.active_elapsed >= budget.t_record) draw += budget.i_led;
    return draw;
}

void check_dt(double dt, const PowerBudget& budget) {
    if (!(dt > 0)) throw std::invalid_argument("dt must be > 0");
    if (dt > budget.t_record)
        throw std::invalid_argument("dt must not exceed t_record");
}

} // namespace

double device_step(DeviceState& s, double harvest, double dt, const PowerBudget& budget,
                   const CapacitorParams& cap, std::vector<Event>& events) {
    check_dt(dt, budget);
    double draw = mcu_draw(s, budget);
    double i_net = harvest - (s.power_source == PowerSource::Capacitor ? draw : 0.0);
    if (s.power_source == PowerSource::Battery) s.battery_time_accum += dt;
    s.v_cap = capacitor_step(s.v_cap, i_net, dt, cap);
    if (s.mcu_mode == McuMode::Active) s.active_elapsed += dt;

    int edge_power = s.cmp_power.update(s.v_cap);
    int edge_mode = s.cmp_mode.update(s.v_cap);

    if (edge_power > 0) {
        s.power_source = PowerSource::Capacitor;
        events.push_back(Event::SwitchedToCapacitor);
    }
    if (edge_mode > 0) {
        s.mcu_mode = McuMode::Active;
        s.active_elapsed = 0;
        events.push_back(Event::RecordStarted);
    }
    if (edge_mode < 0) {
        if (s.mcu_mode == McuMode::Active && s.active_elapsed >= budget.t_record)
            events.push_back(Event::RecordTaken);
        s.mcu_mode = McuMode::Sleep;
    }
    if (edge_power < 0) {
        s.power_source = PowerSource::Battery;
        events.push_back(Event::SwitchedToBattery);
    }
    return i_net;
}

double baseline_step(DeviceState& s, double harvest, double dt, const PowerBudget& budget,
                     const CapacitorParams& cap, std::vector<Event>& events) {
    check_dt(dt, budget);
    double draw = mcu_draw(s, budget);
    double i_net = harvest - (s.power_source == PowerSource::Capacitor ? draw : 0.0);
    if (s.power_source == PowerSource::Battery) s.battery_time_accum += dt;
    s.v_cap = capacitor_step(s.v_cap, i_net, dt, cap);
    if (s.mcu_mode == McuMode::Active) s.active_elapsed += dt;

    // Single comparator drives both the power switch and the MCU mode, so
    // the device runs on battery for the whole recharge interval.
    int edge_mode = s.cmp_mode.update(s.v_cap);
    if (edge_mode > 0) {
        s.power_source = PowerSource::Capacitor;
        events.push_back(Event::SwitchedToCapacitor);
        s.mcu_mode = McuMode::Active;
        s.active_elapsed = 0;
        events.push_back(Event::RecordStarted);
    }
    if (edge_mode < 0) {
        if (s.mcu_mode == McuMode::Active && s.active_elapsed >= budget.t_record)
            events.push_back(Event::RecordTaken);
        s.mcu_mode = McuMode::Sleep;
        s.power_source = PowerSource::Battery;
        events.push_back(Event::SwitchedToBattery);
    }
    return i_net;
}

} // namespace ehl
