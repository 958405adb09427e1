#pragma once

#include <string>

namespace ehl {

/// Classification targets: full or grouped place labels, full or
/// static/dynamic activity labels.
enum class Target { Place14, Place8, Activity5, Activity2 };

Target parse_target(const std::string& name);
std::string target_name(Target t);

/// Picks and groups the label for a (place, activity) row.
/// Place8 merges labs into "lab" and per-floor halls into "hall";
/// Activity2 maps sitting/standing to "static" and walking and stair
/// activities to "dynamic".
std::string target_label(Target t, const std::string& place, const std::string& activity);

std::string group_place8(const std::string& place);
std::string group_activity2(const std::string& activity);

} // namespace ehl
