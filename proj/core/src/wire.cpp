#include "taxelgraph/wire.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace taxelgraph {

namespace {
constexpr uint32_t kFrameMagic = 0x31464754u;   // "TGF1" little-endian
}

void write_frame_message(std::ostream& out, const Eigen::VectorXf& pressure,
                         const JointState& q) {
    const uint32_t n = static_cast<uint32_t>(pressure.size());
    out.write(reinterpret_cast<const char*>(&kFrameMagic), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(pressure.data()),
              static_cast<std::streamsize>(n * sizeof(float)));
    for (Eigen::Index j = 0; j < q.size(); ++j) {
        const float v = static_cast<float>(q[j]);
        out.write(reinterpret_cast<const char*>(&v), sizeof(float));
    }
}

std::optional<WireFrame> read_frame_message(std::istream& in, int n_taxels, int n_joints) {
    uint32_t magic = 0;
    in.read(reinterpret_cast<char*>(&magic), 4);
    if (in.gcount() == 0 && in.eof()) return std::nullopt;
    if (!in || magic != kFrameMagic) throw std::runtime_error("bad TGF1 frame magic");

    uint32_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 4);
    if (!in || static_cast<int>(n) != n_taxels) {
        throw std::runtime_error("TGF1 frame taxel count mismatch");
    }
    WireFrame frame;
    frame.pressure.resize(n);
    in.read(reinterpret_cast<char*>(frame.pressure.data()),
            static_cast<std::streamsize>(n * sizeof(float)));
    frame.q.resize(n_joints);
    for (int j = 0; j < n_joints; ++j) {
        float v = 0.0f;
        in.read(reinterpret_cast<char*>(&v), sizeof(float));
        frame.q[j] = v;
    }
    if (!in) throw std::runtime_error("truncated TGF1 frame");
    return frame;
}

} // namespace taxelgraph
