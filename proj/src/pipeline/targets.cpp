#include "ehl/pipeline/targets.hpp"

#include "ehl/util.hpp"

#include <stdexcept>

namespace ehl {

Target parse_target(const std::string& name) {
    if (name == "place14") return Target::Place14;
    if (name == "place8") return Target::Place8;
    if (name == "activity5") return Target::Activity5;
    if (name == "activity2") return Target::Activity2;
    throw std::invalid_argument("unknown target '" + name +
                                "' (valid: place14, place8, activity5, activity2)");
}

std::string target_name(Target t) {
    switch (t) {
    case Target::Place14: return "place14";
    case Target::Place8: return "place8";
    case Target::Activity5: return "activity5";
    case Target::Activity2: return "activity2";
    }
    return "?";
}

std::string group_place8(const std::string& place) {
    if (starts_with(place, "lab")) return "lab";
    if (place.find("hall") != std::string::npos) return "hall";
    return place;
}

std::string group_activity2(const std::string& activity) {
    if (activity == "sitting" || activity == "standing") return "static";
    if (activity == "walking" || activity == "upstairs" || activity == "downstairs")
        return "dynamic";
    throw std::invalid_argument("unknown activity '" + activity +
                                "' for static/dynamic grouping");
}

std::string target_label(Target t, const std::string& place, const std::string& activity) {
    switch (t) {
    case Target::Place14: return place;
    case Target::Place8: return group_place8(place);
    case Target::Activity5: return activity;
    case Target::Activity2: return group_activity2(activity);
    }
    return place;
}

} // namespace ehl
