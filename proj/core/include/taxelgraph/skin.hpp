#ifndef TAXELGRAPH_SKIN_HPP
#define TAXELGRAPH_SKIN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "taxelgraph/geometry.hpp"

namespace taxelgraph {

/// One tactile sensing point. Positions and normals are in the patch frame;
/// cell_area encodes the local sensing density (m^2 per taxel).
struct Taxel {
    int id = -1;
    int patch_id = -1;
    Vec3 local_position{0, 0, 0};
    Vec3 local_normal{0, 0, 1};
    double cell_area = 1e-4;
};

/// Undirected intra-patch mesh edge. rest_length must equal the patch-frame
/// distance between the endpoints (rigid patch at rest).
struct MeshEdge {
    int a = -1;
    int b = -1;
    double rest_length = 0.0;
};

/// A contiguous rigid skin module mounted on one link of the chain.
struct Patch {
    int patch_id = -1;
    int link_index = -1;
    RigidTransform mount;
    std::vector<int> taxel_ids;
    std::vector<MeshEdge> adjacency;
};

struct Joint {
    Vec3 axis{0, 0, 1};       // unit rotation axis, post-origin frame
    RigidTransform origin;    // fixed transform preceding the joint rotation
};

struct KinematicChain {
    RigidTransform base;
    std::vector<Joint> joints;
    int num_links() const { return static_cast<int>(joints.size()); }
};

using JointState = Eigen::VectorXd;

struct TaxelPose {
    Vec3 position{0, 0, 0};
    Vec3 normal{0, 0, 1};
};

struct SkinConfig {
    std::string name;
    KinematicChain chain;
    std::vector<Patch> patches;
    std::vector<Taxel> taxels;   // indexed by taxel id (dense 0..N-1)

    int num_taxels() const { return static_cast<int>(taxels.size()); }
};

/// World transform of every link for joint state q. Link i's transform is
/// base * origin_0 * R_0(q0) * ... * origin_i * R_i(qi).
/// Throws std::invalid_argument when q length does not match the chain.
std::vector<RigidTransform> forward_kinematics(const KinematicChain& chain,
                                               const JointState& q);

/// World pose of every taxel at joint state q; normals are re-normalized.
std::vector<TaxelPose> taxel_world_poses(const SkinConfig& skin, const JointState& q);

/// Straight-line distance between two taxel world positions.
inline double kinematic_distance(const TaxelPose& a, const TaxelPose& b) {
    return (a.position - b.position).norm();
}

/// Shortest-path length over the intra-patch mesh (rest lengths as weights).
/// Returns nullopt for taxels on different patches (no cross-patch geodesic).
/// Throws std::out_of_range on unknown taxel ids.
std::optional<double> geometric_distance(const SkinConfig& skin, int taxel_a, int taxel_b);

/// Every invariant violation, one human-readable line each (empty = valid).
std::vector<std::string> validate_skin(const SkinConfig& skin);

/// Stable content hash of the configuration (canonical JSON serialization).
uint64_t skin_config_hash(const SkinConfig& skin);

} // namespace taxelgraph

#endif
