#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ehl {

struct PlaceProfile {
    std::string name;
    double lux_mean = 0;
    double lux_std = 0;
    double flicker_amp = 0; // lux, mains flicker amplitude
    double flicker_hz = 0;
};

enum class ActivityClass : std::uint8_t { Static, Dynamic };

struct ActivityProfile {
    std::string name;
    ActivityClass cls = ActivityClass::Static;
    double vib_amp = 0;      // g
    double vib_hz = 0;
    double shadow_depth = 0; // fraction of light blocked while shadowed
    double shadow_hz = 0;
};

struct Segment {
    int place = 0;    // index into Scenario::places
    int activity = 0; // index into Scenario::activities
    double duration = 0;
};

struct Ambient {
    double lux = 0;
    double accel_g = 0;
    int place = 0;
    int activity = 0;
};

/// Timed sequence of (place, activity) segments plus the profile catalogs.
/// Immutable after finalize(); playback is a pure function of (scenario, t).
struct Scenario {
    std::vector<PlaceProfile> places;
    std::vector<ActivityProfile> activities;
    std::vector<Segment> segments;
    std::uint64_t seed = 0;

    /// Validates invariants and precomputes segment start times.
    void finalize();

    double total_duration() const { return total_; }
    int segment_at(double t) const;

    int place_index(const std::string& name) const;
    int activity_index(const std::string& name) const;

    std::vector<double> starts_; // segment start times, filled by finalize()
    double total_ = 0;
};

/// Parses the scenario text format: sections [places], [activities],
/// [timeline]; whitespace-separated fields; '#' starts a comment.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Environment playback at time t (pure; noise derived from scenario seed).
/// lux = max(0, mean + std*n(t) + flicker) * (1 - shadow_depth*square01),
/// accel = vib_amp*sin(2*pi*vib_hz*t) + jitter.
Ambient ambient_at(const Scenario& sc, double t);

/// Sequential-access variant of ambient_at that caches the current noise
/// cell (noise is held for 10 ms stretches). Bitwise-identical results.
class AmbientSampler {
public:
    explicit AmbientSampler(const Scenario& sc) : sc_(&sc) {}
    Ambient at(double t);

private:
    const Scenario* sc_;
    std::uint64_t cached_index_ = ~0ULL;
    double n_lux_ = 0;
    double n_acc_ = 0;
};

} // namespace ehl
