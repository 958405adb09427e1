#include "ehl/simulator.hpp"

#include "ehl/util.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ehl {

namespace {

std::uint16_t to_mv(double volts) {
    double mv = std::llround(volts * 1000.0);
    return static_cast<std::uint16_t>(std::clamp(mv, 0.0, 65535.0));
}

} // namespace

RunResult run(const Scenario& sc, const DeviceConfig& cfg, RunMode mode) {
    cfg.validate();
    if (sc.segments.empty() || !(sc.total_duration() > 0))
        throw std::invalid_argument("scenario is empty");

    DeviceState st = make_device_state(cfg.cmp_power_fall, cfg.cmp_power_rise,
                                       cfg.cmp_mode_offset, cfg.v_cap_initial);
    RunResult res;
    res.log = RecordLog(cfg.capacity_bytes);
    res.trace.interval = cfg.trace_interval;
    res.initial_v_cap = st.v_cap;

    const double dt = cfg.dt;
    const auto n_steps = static_cast<std::uint64_t>(sc.total_duration() / dt + 1e-9);

    bool pending_session = st.power_source == PowerSource::Capacitor;
    double pending_power_on = 0;
    double battery_since = 0; // start of the current battery stretch
    double next_trace_t = 0;

    AmbientSampler sampler(sc);
    std::vector<Event> events;
    for (std::uint64_t k = 0; k < n_steps; ++k) {
        double t = static_cast<double>(k) * dt;
        Ambient amb = sampler.at(t);
        double harvest = harvest_current(cfg.sc1, amb.lux) + harvest_current(cfg.sc2, amb.lux);

        if (t >= next_trace_t - 1e-12) {
            res.trace.entries.push_back({t, st.power_source, st.mcu_mode, st.v_cap});
            next_trace_t += cfg.trace_interval;
        }

        events.clear();
        double i_net = (mode == RunMode::Proposed)
                           ? device_step(st, harvest, dt, cfg.budget, cfg.cap, events)
                           : baseline_step(st, harvest, dt, cfg.budget, cfg.cap, events);
        res.charge_integral_c += i_net * dt;

        double t_next = static_cast<double>(k + 1) * dt;
        for (Event ev : events) {
            switch (ev) {
            case Event::SwitchedToCapacitor:
                if (res.log.empty() || t_next - battery_since >= cfg.session_gap) {
                    pending_session = true;
                    pending_power_on = t_next;
                }
                break;
            case Event::SwitchedToBattery:
                battery_since = t_next;
                break;
            case Event::RecordTaken: {
                if (pending_session) {
                    res.log.begin_session(static_cast<std::uint64_t>(
                        std::llround(pending_power_on * 1000.0)));
                    pending_session = false;
                }
                Sample s;
                s.t_ms = static_cast<std::uint64_t>(std::llround(t_next * 1000.0));
                s.sc1_mv = to_mv(open_circuit_voltage(cfg.sc1, amb.lux, cfg.l_ref));
                s.sc2_mv = to_mv(open_circuit_voltage(cfg.sc2, amb.lux, cfg.l_ref));
                s.piezo_mv = to_mv(std::abs(piezo_voltage(cfg.piezo, amb.accel_g)));
                if (!res.log.try_append(s)) ++res.dropped_samples;
                break;
            }
            case Event::RecordStarted:
                break;
            }
        }
    }

    res.final_v_cap = st.v_cap;
    res.battery_time = st.battery_time_accum;
    return res;
}

ZeroEnergyReport zero_energy_rate(const PowerTrace& trace) {
    if (trace.entries.empty()) throw std::invalid_argument("empty power trace");
    std::uint64_t on_cap = 0;
    for (const auto& e : trace.entries)
        if (e.power_source == PowerSource::Capacitor) ++on_cap;
    ZeroEnergyReport rep;
    rep.zero_energy_time = static_cast<double>(on_cap) * trace.interval;
    rep.battery_time =
        static_cast<double>(trace.entries.size() - on_cap) * trace.interval;
    rep.zero_energy_rate = static_cast<double>(on_cap) / trace.entries.size();
    return rep;
}

std::string trace_to_csv(const PowerTrace& trace) {
    std::ostringstream os;
    os << "t_s,power_source,mcu_mode,v_cap\n";
    for (const auto& e : trace.entries) {
        os << fmt_double(e.t) << ','
           << (e.power_source == PowerSource::Capacitor ? "capacitor" : "battery") << ','
           << (e.mcu_mode == McuMode::Active ? "active" : "sleep") << ','
           << fmt_double(e.v_cap) << "\n";
    }
    return os.str();
}

PowerTrace trace_from_csv(const std::string& text) {
    PowerTrace trace;
    int lineno = 0;
    bool header_seen = false;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? eol : eol - pos);
        pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
        ++lineno;
        line = strip(line);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "t_s,power_source,mcu_mode,v_cap")
                throw ParseError("bad trace header", lineno);
            header_seen = true;
            continue;
        }
        auto cols = split_char(line, ',');
        if (cols.size() != 4) throw ParseError("expected 4 columns", lineno);
        TraceEntry e;
        try {
            e.t = std::stod(cols[0]);
            e.v_cap = std::stod(cols[3]);
        } catch (const std::exception&) {
            throw ParseError("bad numeric field", lineno);
        }
        if (cols[1] == "capacitor") e.power_source = PowerSource::Capacitor;
        else if (cols[1] == "battery") e.power_source = PowerSource::Battery;
        else throw ParseError("bad power_source '" + cols[1] + "'", lineno);
        if (cols[2] == "active") e.mcu_mode = McuMode::Active;
        else if (cols[2] == "sleep") e.mcu_mode = McuMode::Sleep;
        else throw ParseError("bad mcu_mode '" + cols[2] + "'", lineno);
        if (!trace.entries.empty() && e.t <= trace.entries.back().t)
            throw ParseError("trace times must strictly increase", lineno);
        trace.entries.push_back(e);
    }
    if (!header_seen) throw ParseError("missing trace header", lineno);
    if (trace.entries.size() >= 2)
        trace.interval = trace.entries[1].t - trace.entries[0].t;
    return trace;
}

std::string scenario_truth_csv(const Scenario& sc) {
    std::ostringstream os;
    os << "t_s,place,activity\n";
    for (size_t i = 0; i < sc.segments.size(); ++i) {
        const auto& seg = sc.segments[i];
        os << fmt_double(sc.starts_[i]) << ',' << sc.places[seg.place].name << ','
           << sc.activities[seg.activity].name << "\n";
    }
    return os.str();
}

} // namespace ehl
