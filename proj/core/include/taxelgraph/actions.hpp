#ifndef TAXELGRAPH_ACTIONS_HPP
#define TAXELGRAPH_ACTIONS_HPP

#include "taxelgraph/gesture.hpp"

namespace taxelgraph {

/// Robot-side command state driven by recognized gestures.
struct RobotActionState {
    bool running = true;
    bool gripper_closed = false;
    unsigned waypoint_index = 0;

    bool operator==(const RobotActionState&) const = default;
};

/// poke toggles pause/resume, grab toggles the gripper, double_pat advances
/// to the next waypoint while running (ignored when paused), stroke is a
/// reserved no-op slot.
RobotActionState apply_gesture(const RobotActionState& state, GestureClass gesture);

} // namespace taxelgraph

#endif
