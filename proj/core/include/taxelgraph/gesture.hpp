#ifndef TAXELGRAPH_GESTURE_HPP
#define TAXELGRAPH_GESTURE_HPP

#include <array>
#include <optional>
#include <string>

namespace taxelgraph {

enum class GestureClass : int {
    poke = 0,
    double_pat = 1,
    grab = 2,
    stroke = 3,
};

inline constexpr int kNumGestureClasses = 4;

inline constexpr std::array<const char*, kNumGestureClasses> kGestureNames = {
    "poke", "double_pat", "grab", "stroke"};

inline const char* to_string(GestureClass c) {
    return kGestureNames[static_cast<int>(c)];
}

inline std::optional<GestureClass> gesture_from_string(const std::string& s) {
    for (int i = 0; i < kNumGestureClasses; ++i) {
        if (s == kGestureNames[i]) return static_cast<GestureClass>(i);
    }
    return std::nullopt;
}

} // namespace taxelgraph

#endif
