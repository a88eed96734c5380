#ifndef TAXELGRAPH_GRAPH_HPP
#define TAXELGRAPH_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "taxelgraph/skin.hpp"

namespace taxelgraph {

/// Undirected tactile-graph edge between node slots a and b (indices into
/// the graph's node arrays, with node_ids[a] < node_ids[b]).
///
/// distance is the kinematic (world straight-line) distance; geodesic is
/// the mesh rest-length and only meaningful for static edges. normal_dot
/// and the two direction dots are the SE(3)-invariant orientation scalars
/// attached at build time: dir_dot_a = n_a . (x_b - x_a)/|x_b - x_a| and
/// symmetrically for b.
struct GraphEdge {
    int a = 0;
    int b = 0;
    double distance = 0.0;
    bool is_static = false;
    double geodesic = 0.0;
    double normal_dot = 0.0;
    double dir_dot_a = 0.0;
    double dir_dot_b = 0.0;
};

struct TactileGraph {
    std::vector<int> node_ids;          // taxel ids, strictly increasing
    std::vector<double> pressure;       // per node
    std::vector<double> cell_area;      // per node
    std::vector<Vec3> positions;        // world, per node
    std::vector<Vec3> normals;          // world unit, per node
    std::vector<GraphEdge> edges;       // canonical order: (node_ids[a], node_ids[b]) ascending

    int num_nodes() const { return static_cast<int>(node_ids.size()); }
};

struct GraphWindow {
    std::vector<TactileGraph> graphs;   // time order, oldest first
};

/// Precomputed union of all intra-patch adjacency, with a per-taxel
/// neighbor index for halo expansion. Built once per skin config.
class StaticEdges {
public:
    explicit StaticEdges(const SkinConfig& skin);

    struct Edge {
        int a, b;             // taxel ids, a < b
        double rest_length;
    };

    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const int> neighbors(int taxel_id) const;
    uint64_t skin_hash() const { return skin_hash_; }
    bool has_edge(int taxel_a, int taxel_b) const;

private:
    std::vector<Edge> edges_;
    std::vector<int> offsets_;     // CSR over taxel ids
    std::vector<int> neighbor_ids_;
    uint64_t skin_hash_ = 0;
};

/// Taxels whose pressure exceeds theta_act plus their 1-hop static
/// neighbors (the activation halo). Sorted ascending, deduplicated.
std::vector<int> activated_nodes(std::span<const float> pressure, const StaticEdges& statics,
                                 double theta_act);

/// K-nearest-neighbor edges among the active taxels by kinematic distance,
/// ties broken toward the lower taxel id. Result is deduplicated unordered
/// pairs sorted by (min id, max id). Nodes beyond the population size
/// connect to everything available. Exact: equals the O(n^2) scan.
std::vector<std::pair<int, int>> dynamic_knn_edges(std::span<const TaxelPose> poses,
                                                   std::span<const int> active, int k);

/// Assembles the per-frame graph: nodes are the activation set, static
/// edges restricted to it, dynamic KNN edges on top (static wins when the
/// same pair appears in both).
TactileGraph build_graph(const SkinConfig& skin, const StaticEdges& statics,
                         std::span<const TaxelPose> poses, std::span<const float> pressure,
                         double theta_act, int k);

/// Convenience overload running forward kinematics for the frame's q.
TactileGraph build_graph(const SkinConfig& skin, const StaticEdges& statics, const JointState& q,
                         std::span<const float> pressure, double theta_act, int k);

/// Debug dump: node table then one line per edge `i j dist static_flag`.
void write_graph_dump(std::ostream& out, const TactileGraph& graph);

} // namespace taxelgraph

#endif
