#include "ehl/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ehl {

void HarvesterParams::validate() const {
    if (!(i_max > 0)) throw std::invalid_argument("harvester i_max must be > 0");
    if (!(l_sat > 0)) throw std::invalid_argument("harvester l_sat must be > 0");
    if (!(voc_max > 0)) throw std::invalid_argument("harvester voc_max must be > 0");
    if (!(l_knee > 0)) throw std::invalid_argument("harvester l_knee must be > 0");
}

void PiezoParams::validate() const {
    if (!(sensitivity > 0)) throw std::invalid_argument("piezo sensitivity must be > 0");
}

void CapacitorParams::validate() const {
    if (!(capacitance > 0)) throw std::invalid_argument("capacitance must be > 0");
    if (!(v_max > 0)) throw std::invalid_argument("capacitor v_max must be > 0");
}

void HysteresisComparator::validate() const {
    if (!(v_rise > v_fall))
        throw std::invalid_argument("comparator requires v_rise > v_fall");
}

int HysteresisComparator::update(double v_in) {
    if (!output && v_in >= v_rise) {
        output = true;
        return +1;
    }
    if (output && v_in <= v_fall) {
        output = false;
        return -1;
    }
    return 0;
}

double harvest_current(const HarvesterParams& cell, double lux) {
    if (lux < 0) throw std::invalid_argument("illuminance must be >= 0");
    return cell.i_max * std::min(1.0, lux / cell.l_sat);
}

double open_circuit_voltage(const HarvesterParams& cell, double lux, double l_ref) {
    if (lux < 0) throw std::invalid_argument("illuminance must be >= 0");
    double v = cell.voc_max * std::log1p(lux / cell.l_knee) / std::log1p(l_ref / cell.l_knee);
    return std::clamp(v, 0.0, cell.voc_max);
}

double piezo_voltage(const PiezoParams& p, double accel_g) {
    return p.sensitivity * accel_g;
}

double capacitor_step(double v, double i_net, double dt, const CapacitorParams& cap) {
    if (!(dt > 0)) throw std::invalid_argument("dt must be > 0");
    return std::clamp(v + i_net * dt / cap.capacitance, 0.0, cap.v_max);
}

} // namespace ehl
