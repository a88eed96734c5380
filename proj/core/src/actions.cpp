#include "taxelgraph/actions.hpp"

namespace taxelgraph {

RobotActionState apply_gesture(const RobotActionState& state, GestureClass gesture) {
    RobotActionState next = state;
    switch (gesture) {
        case GestureClass::poke:
            next.running = !state.running;
            break;
        case GestureClass::grab:
            next.gripper_closed = !state.gripper_closed;
            break;
        case GestureClass::double_pat:
            if (state.running) next.waypoint_index = state.waypoint_index + 1;
            break;
        case GestureClass::stroke:
            break;   // reserved command slot, logged by the caller
    }
    return next;
}

} // namespace taxelgraph
