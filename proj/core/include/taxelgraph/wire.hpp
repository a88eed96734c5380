#ifndef TAXELGRAPH_WIRE_HPP
#define TAXELGRAPH_WIRE_HPP

#include <iosfwd>
#include <optional>

#include "taxelgraph/synth.hpp"

namespace taxelgraph {

// Frame wire format, one message per frame, little-endian, magic "TGF1":
//   u32 magic | u32 n_taxels | f32 pressures | f32 joint angles
// The joint count comes from the receiver's skin configuration.

struct WireFrame {
    Eigen::VectorXf pressure;
    JointState q;
};

void write_frame_message(std::ostream& out, const Eigen::VectorXf& pressure, const JointState& q);

/// Reads one message; nullopt at a clean end of stream, throws on a
/// malformed or truncated message or a taxel-count mismatch.
std::optional<WireFrame> read_frame_message(std::istream& in, int n_taxels, int n_joints);

} // namespace taxelgraph

#endif
