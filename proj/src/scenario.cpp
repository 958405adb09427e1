#include "ehl/scenario.hpp"

#include "ehl/rng.hpp"
#include "ehl/util.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ehl {

namespace {

constexpr double kTwoPi = 6.283185307179586;
constexpr double kNoiseHold = 0.01;   // s, illuminance/accel noise refresh period
constexpr double kAccelNoiseSigma = 0.005; // g

// 0/1 square wave: 1 during the first half of each period.
double square01(double freq_hz, double t) {
    if (freq_hz <= 0) return 0.0;
    double phase = freq_hz * t;
    return (phase - std::floor(phase)) < 0.5 ? 1.0 : 0.0;
}

} // namespace

void Scenario::finalize() {
    if (segments.empty()) throw std::invalid_argument("scenario has no segments");
    starts_.clear();
    starts_.reserve(segments.size());
    double t = 0;
    for (const auto& seg : segments) {
        if (!(seg.duration > 0)) throw std::invalid_argument("segment duration must be > 0");
        if (seg.place < 0 || seg.place >= static_cast<int>(places.size()))
            throw std::invalid_argument("segment references unknown place");
        if (seg.activity < 0 || seg.activity >= static_cast<int>(activities.size()))
            throw std::invalid_argument("segment references unknown activity");
        starts_.push_back(t);
        t += seg.duration;
    }
    total_ = t;
    for (const auto& p : places) {
        if (p.lux_mean < 0 || p.lux_std < 0)
            throw std::invalid_argument("place '" + p.name + "' has negative lux parameters");
    }
    for (const auto& a : activities) {
        if (a.cls == ActivityClass::Static && a.vib_amp > 0.05)
            throw std::invalid_argument("static activity '" + a.name + "' exceeds 0.05 g");
        if (a.shadow_depth < 0 || a.shadow_depth >= 1.0)
            throw std::invalid_argument("activity '" + a.name + "' needs shadow_depth in [0,1)");
    }
}

int Scenario::segment_at(double t) const {
    if (t < 0 || t >= total_)
        throw std::invalid_argument("time outside scenario duration");
    auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
    return static_cast<int>(it - starts_.begin()) - 1;
}

int Scenario::place_index(const std::string& name) const {
    for (size_t i = 0; i < places.size(); ++i)
        if (places[i].name == name) return static_cast<int>(i);
    return -1;
}

int Scenario::activity_index(const std::string& name) const {
    for (size_t i = 0; i < activities.size(); ++i)
        if (activities[i].name == name) return static_cast<int>(i);
    return -1;
}

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    enum class Section { None, Places, Activities, Timeline } section = Section::None;
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

        if (line == "[places]") { section = Section::Places; continue; }
        if (line == "[activities]") { section = Section::Activities; continue; }
        if (line == "[timeline]") { section = Section::Timeline; continue; }
        if (line.front() == '[')
            throw ParseError("unknown section " + line, lineno);

        auto fields = split_ws(line);
        auto num = [&](const std::string& s) {
            size_t used = 0;
            double v;
            try {
                v = std::stod(s, &used);
            } catch (const std::exception&) {
                throw ParseError("bad number '" + s + "'", lineno);
            }
            if (used != s.size()) throw ParseError("bad number '" + s + "'", lineno);
            return v;
        };

        switch (section) {
        case Section::Places: {
            if (fields.size() != 5)
                throw ParseError("place needs: name lux_mean lux_std flicker_amp flicker_hz", lineno);
            if (sc.place_index(fields[0]) >= 0)
                throw ParseError("duplicate place '" + fields[0] + "'", lineno);
            sc.places.push_back({fields[0], num(fields[1]), num(fields[2]),
                                 num(fields[3]), num(fields[4])});
            break;
        }
        case Section::Activities: {
            if (fields.size() != 6)
                throw ParseError("activity needs: name class vib_amp vib_hz shadow_depth shadow_hz",
                                 lineno);
            if (sc.activity_index(fields[0]) >= 0)
                throw ParseError("duplicate activity '" + fields[0] + "'", lineno);
            ActivityClass cls;
            if (fields[1] == "static") cls = ActivityClass::Static;
            else if (fields[1] == "dynamic") cls = ActivityClass::Dynamic;
            else throw ParseError("activity class must be static or dynamic", lineno);
            sc.activities.push_back({fields[0], cls, num(fields[2]), num(fields[3]),
                                     num(fields[4]), num(fields[5])});
            break;
        }
        case Section::Timeline: {
            if (fields.size() != 3)
                throw ParseError("timeline needs: place activity duration_s", lineno);
            int pi = sc.place_index(fields[0]);
            if (pi < 0) throw ParseError("unknown place '" + fields[0] + "'", lineno);
            int ai = sc.activity_index(fields[1]);
            if (ai < 0) throw ParseError("unknown activity '" + fields[1] + "'", lineno);
            double dur = num(fields[2]);
            if (!(dur > 0)) throw ParseError("duration must be > 0", lineno);
            sc.segments.push_back({pi, ai, dur});
            break;
        }
        case Section::None:
            throw ParseError("content before any section header", lineno);
        }
    }
    try {
        sc.finalize();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), lineno);
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    return parse_scenario(read_file(path));
}

namespace {

Ambient ambient_eval(const Scenario& sc, double t, double n_lux, double n_acc) {
    int si = sc.segment_at(t);
    const Segment& seg = sc.segments[si];
    const PlaceProfile& pl = sc.places[seg.place];
    const ActivityProfile& act = sc.activities[seg.activity];

    double lux = pl.lux_mean + pl.lux_std * n_lux;
    if (pl.flicker_amp > 0)
        lux += pl.flicker_amp * std::sin(kTwoPi * pl.flicker_hz * t);
    lux = std::max(0.0, lux);
    if (act.shadow_depth > 0)
        lux *= 1.0 - act.shadow_depth * square01(act.shadow_hz, t);

    double accel = kAccelNoiseSigma * n_acc;
    if (act.vib_amp > 0)
        accel += act.vib_amp * std::sin(kTwoPi * act.vib_hz * t);

    return {lux, accel, seg.place, seg.activity};
}

std::uint64_t noise_cell(double t) {
    return static_cast<std::uint64_t>(std::floor(t / kNoiseHold));
}

} // namespace

Ambient ambient_at(const Scenario& sc, double t) {
    std::uint64_t idx = noise_cell(t);
    double n_lux = gauss_hash(hash_combine(sc.seed, idx * 2));
    double n_acc = gauss_hash(hash_combine(sc.seed, idx * 2 + 1));
    return ambient_eval(sc, t, n_lux, n_acc);
}

Ambient AmbientSampler::at(double t) {
    std::uint64_t idx = noise_cell(t);
    if (idx != cached_index_) {
        cached_index_ = idx;
        n_lux_ = gauss_hash(hash_combine(sc_->seed, idx * 2));
        n_acc_ = gauss_hash(hash_combine(sc_->seed, idx * 2 + 1));
    }
    return ambient_eval(*sc_, t, n_lux_, n_acc_);
}

} // namespace ehl
