#pragma once

namespace ehl {

/// Behavioral solar-cell model. Harvest current ramps linearly with
/// illuminance up to l_sat; the sensed open-circuit voltage follows a
/// normalized log curve with knee l_knee.
struct HarvesterParams {
    double i_max = 0;   // A, harvest current at saturation
    double l_sat = 0;   // lux, illuminance where current saturates
    double voc_max = 0; // V, open-circuit voltage ceiling
    double l_knee = 0;  // lux, log-curve knee of the sensed voltage

    void validate() const;
};

struct PiezoParams {
    double sensitivity = 0.400; // V per g

    void validate() const;
};

struct CapacitorParams {
    double capacitance = 47e-6; // F
    double v_max = 5.0;         // V

    void validate() const;
};

/// Threshold detector with hysteresis: output latches high at v_rise and
/// low at v_fall; in between it keeps its previous value.
struct HysteresisComparator {
    double v_rise = 0;
    double v_fall = 0;
    bool output = false;

    void validate() const;

    /// Re-evaluates the output for a new input voltage.
    /// Returns +1 on a rising edge, -1 on a falling edge, 0 otherwise.
    int update(double v_in);

    bool operator==(const HysteresisComparator&) const = default;
};

/// Harvest current at the given illuminance: i_max * min(1, lux / l_sat).
double harvest_current(const HarvesterParams& cell, double lux);

/// Sensed open-circuit voltage, normalized so that ocv(l_ref) == voc_max:
///   voc_max * ln(1 + lux/l_knee) / ln(1 + l_ref/l_knee), clamped to [0, voc_max].
double open_circuit_voltage(const HarvesterParams& cell, double lux, double l_ref);

/// Piezo transduction: sensitivity * accel (signed, linear).
double piezo_voltage(const PiezoParams& p, double accel_g);

/// One Euler step of the capacitor: clamp(v + i_net*dt/C, 0, v_max).
double capacitor_step(double v, double i_net, double dt, const CapacitorParams& cap);

} // namespace ehl
