#include "ehl/config.hpp"

#include "ehl/util.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace ehl {

void DeviceConfig::validate() const {
    try {
        cap.validate();
        sc1.validate();
        sc2.validate();
        piezo.validate();
        budget.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(cmp_power_rise > cmp_power_fall))
        throw ConfigError("cmp_power_rise must exceed cmp_power_fall");
    if (!(cmp_mode_offset > 0)) throw ConfigError("cmp_mode_offset must be > 0");
    if (!(l_ref > 0)) throw ConfigError("l_ref must be > 0");
    if (!(dt > 0)) throw ConfigError("dt must be > 0");
    if (dt > budget.t_record) throw ConfigError("dt must not exceed t_record");
    if (!(trace_interval > 0)) throw ConfigError("trace_interval must be > 0");
    if (!(session_gap > 0)) throw ConfigError("session_gap must be > 0");
    if (capacity_bytes < 18) throw ConfigError("capacity_bytes too small for one record");
    if (v_cap_initial < 0 || v_cap_initial > cap.v_max)
        throw ConfigError("v_cap_initial outside [0, v_cap_max]");
}

double parse_unit_value(const std::string& token) {
    size_t used = 0;
    double v;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value '" + token + "'");
    }
    std::string suffix = strip(token.substr(used));
    if (suffix.empty()) return v;

    static const std::map<char, double> prefixes = {
        {'n', 1e-9}, {'u', 1e-6}, {'m', 1e-3}, {'k', 1e3}, {'M', 1e6}};
    static const char* units[] = {"F", "V", "A", "s", "lx", "Hz", "B", "g", "V/g"};

    for (const char* u : units) {
        if (suffix == u) return v;
        if (suffix.size() > 1 && suffix.substr(1) == u) {
            auto it = prefixes.find(suffix[0]);
            if (it != prefixes.end()) return v * it->second;
        }
    }
    throw ConfigError("unknown unit suffix '" + suffix + "' in '" + token + "'");
}

DeviceConfig parse_config(const std::string& text) {
    DeviceConfig cfg;

    std::map<std::string, std::function<void(const std::string&)>> setters;
    auto num = [&](double* field) {
        return [field](const std::string& v) { *field = parse_unit_value(v); };
    };
    auto uint = [&](std::uint64_t* field) {
        return [field](const std::string& v) {
            size_t used = 0;
            unsigned long long x;
            try {
                x = std::stoull(v, &used);
            } catch (const std::exception&) {
                throw ConfigError("bad integer value '" + v + "'");
            }
            if (used != v.size()) throw ConfigError("bad integer value '" + v + "'");
            *field = x;
        };
    };

    setters["capacitance"] = num(&cfg.cap.capacitance);
    setters["v_cap_max"] = num(&cfg.cap.v_max);
    setters["v_cap_initial"] = num(&cfg.v_cap_initial);
    setters["cmp_power_fall"] = num(&cfg.cmp_power_fall);
    setters["cmp_power_rise"] = num(&cfg.cmp_power_rise);
    setters["cmp_mode_offset"] = num(&cfg.cmp_mode_offset);
    setters["i_sleep"] = num(&cfg.budget.i_sleep);
    setters["i_active"] = num(&cfg.budget.i_active);
    setters["i_led"] = num(&cfg.budget.i_led);
    setters["t_record"] = num(&cfg.budget.t_record);
    setters["dt"] = num(&cfg.dt);
    setters["trace_interval"] = num(&cfg.trace_interval);
    setters["session_gap"] = num(&cfg.session_gap);
    setters["capacity_bytes"] = uint(&cfg.capacity_bytes);
    setters["seed"] = uint(&cfg.seed);
    setters["l_ref"] = num(&cfg.l_ref);
    setters["piezo_sensitivity"] = num(&cfg.piezo.sensitivity);
    for (auto [prefix, cell] : {std::pair{"sc1_", &cfg.sc1}, std::pair{"sc2_", &cfg.sc2}}) {
        setters[std::string(prefix) + "i_max"] = num(&cell->i_max);
        setters[std::string(prefix) + "l_sat"] = num(&cell->l_sat);
        setters[std::string(prefix) + "voc_max"] = num(&cell->voc_max);
        setters[std::string(prefix) + "l_knee"] = num(&cell->l_knee);
    }

    int lineno = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string raw = text.substr(pos, eol == std::string::npos ? eol : eol - pos);
        pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
        ++lineno;

        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string line = strip(raw);
        if (line.empty()) continue;

        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", lineno);
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end())
            throw ParseError("unknown config key '" + key + "'", lineno);
        try {
            it->second(value);
        } catch (const ConfigError& e) {
            throw ParseError(e.what(), lineno);
        }
    }

    cfg.validate();
    return cfg;
}

DeviceConfig load_config(const std::string& path) {
    return parse_config(read_file(path));
}

} // namespace ehl
