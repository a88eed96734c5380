#include "taxelgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace taxelgraph {

StaticEdges::StaticEdges(const SkinConfig& skin) {
    skin_hash_ = skin_config_hash(skin);
    for (const Patch& p : skin.patches) {
        for (const MeshEdge& e : p.adjacency) {
            edges_.push_back({std::min(e.a, e.b), std::max(e.a, e.b), e.rest_length});
        }
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& l, const Edge& r) { return std::tie(l.a, l.b) < std::tie(r.a, r.b); });

    const int n = skin.num_taxels();
    std::vector<int> degree(n, 0);
    for (const Edge& e : edges_) {
        ++degree[e.a];
        ++degree[e.b];
    }
    offsets_.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
    neighbor_ids_.resize(offsets_[n]);
    std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges_) {
        neighbor_ids_[cursor[e.a]++] = e.b;
        neighbor_ids_[cursor[e.b]++] = e.a;
    }
    for (int i = 0; i < n; ++i) {
        std::sort(neighbor_ids_.begin() + offsets_[i], neighbor_ids_.begin() + offsets_[i + 1]);
    }
}

std::span<const int> StaticEdges::neighbors(int taxel_id) const {
    return {neighbor_ids_.data() + offsets_.at(taxel_id),
            neighbor_ids_.data() + offsets_.at(taxel_id + 1)};
}

bool StaticEdges::has_edge(int taxel_a, int taxel_b) const {
    const auto nb = neighbors(taxel_a);
    return std::binary_search(nb.begin(), nb.end(), taxel_b);
}

std::vector<int> activated_nodes(std::span<const float> pressure, const StaticEdges& statics,
                                 double theta_act) {
    std::vector<int> out;
    std::vector<char> marked(pressure.size(), 0);
    for (int i = 0; i < static_cast<int>(pressure.size()); ++i) {
        if (pressure[i] > theta_act) {
            if (!marked[i]) {
                marked[i] = 1;
                out.push_back(i);
            }
            for (int nb : statics.neighbors(i)) {
                if (!marked[nb]) {
                    marked[nb] = 1;
                    out.push_back(nb);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Exact KNN over the active set. Brute force for small populations; a
// uniform voxel grid with certified shell expansion otherwise. Both paths
// order candidates by (squared distance, taxel id), so results match the
// exhaustive scan including tie handling.
class ActiveKnn {
public:
    ActiveKnn(std::span<const TaxelPose> poses, std::span<const int> active)
        : poses_(poses), active_(active) {
        const int n = static_cast<int>(active.size());
        if (n < kBruteThreshold) return;

        Vec3 lo = poses[active[0]].position, hi = lo;
        for (int id : active) {
            lo = lo.cwiseMin(poses[id].position);
            hi = hi.cwiseMax(poses[id].position);
        }
        const Vec3 span = (hi - lo).cwiseMax(1e-9);
        // Aim for a few points per cell.
        const double vol = span.x() * span.y() * span.z();
        cell_ = std::max(1e-6, std::cbrt(vol / n) * 1.5);
        origin_ = lo;
        for (int i = 0; i < 3; ++i) {
            dims_[i] = std::max<int64_t>(1, static_cast<int64_t>(span[i] / cell_) + 1);
        }
        for (int id : active) {
            cells_[cell_key(poses[id].position)].push_back(id);
        }
        use_grid_ = true;
    }

    // k nearest active taxels to `query_id` (excluding itself).
    void nearest(int query_id, int k, std::vector<int>& out) const {
        out.clear();
        if (!use_grid_) {
            brute(query_id, k, out);
            return;
        }
        const Vec3 q = poses_[query_id].position;
        candidates_.clear();
        int64_t cx, cy, cz;
        cell_coords(q, cx, cy, cz);

        int ring = 0;
        while (true) {
            collect_ring(cx, cy, cz, ring, query_id);
            // Any unseen point is at least (ring-1) cells away; the extra
            // cell of slack absorbs boundary clamping of cell coordinates.
            const double certified = (ring - 1) * cell_;
            if (static_cast<int>(candidates_.size()) >= k) {
                std::nth_element(candidates_.begin(), candidates_.begin() + (k - 1),
                                 candidates_.end());
                const double dk = std::sqrt(candidates_[k - 1].first);
                if (dk < certified) break;
            }
            // Entire population collected: nothing further to see.
            if (ring > dims_[0] + dims_[1] + dims_[2]) break;
            ++ring;
        }
        const int take = std::min<int>(k, static_cast<int>(candidates_.size()));
        std::partial_sort(candidates_.begin(), candidates_.begin() + take, candidates_.end());
        for (int i = 0; i < take; ++i) out.push_back(candidates_[i].second);
    }

private:
    static constexpr int kBruteThreshold = 64;

    void brute(int query_id, int k, std::vector<int>& out) const {
        candidates_.clear();
        const Vec3 q = poses_[query_id].position;
        for (int id : active_) {
            if (id == query_id) continue;
            candidates_.emplace_back((poses_[id].position - q).squaredNorm(), id);
        }
        const int take = std::min<int>(k, static_cast<int>(candidates_.size()));
        std::partial_sort(candidates_.begin(), candidates_.begin() + take, candidates_.end());
        for (int i = 0; i < take; ++i) out.push_back(candidates_[i].second);
    }

    void cell_coords(const Vec3& p, int64_t& x, int64_t& y, int64_t& z) const {
        x = std::clamp<int64_t>(static_cast<int64_t>((p.x() - origin_.x()) / cell_), 0, dims_[0] - 1);
        y = std::clamp<int64_t>(static_cast<int64_t>((p.y() - origin_.y()) / cell_), 0, dims_[1] - 1);
        z = std::clamp<int64_t>(static_cast<int64_t>((p.z() - origin_.z()) / cell_), 0, dims_[2] - 1);
    }

    int64_t cell_key(const Vec3& p) const {
        int64_t x, y, z;
        cell_coords(p, x, y, z);
        return (x * dims_[1] + y) * dims_[2] + z;
    }

    void collect_ring(int64_t cx, int64_t cy, int64_t cz, int ring, int query_id) const {
        const Vec3 q = poses_[query_id].position;
        auto visit = [&](int64_t x, int64_t y, int64_t z) {
            if (x < 0 || y < 0 || z < 0 || x >= dims_[0] || y >= dims_[1] || z >= dims_[2]) return;
            auto it = cells_.find((x * dims_[1] + y) * dims_[2] + z);
            if (it == cells_.end()) return;
            for (int id : it->second) {
                if (id == query_id) continue;
                candidates_.emplace_back((poses_[id].position - q).squaredNorm(), id);
            }
        };
        if (ring == 0) {
            visit(cx, cy, cz);
            return;
        }
        for (int64_t dx = -ring; dx <= ring; ++dx) {
            for (int64_t dy = -ring; dy <= ring; ++dy) {
                for (int64_t dz = -ring; dz <= ring; ++dz) {
                    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring) continue;
                    visit(cx + dx, cy + dy, cz + dz);
                }
            }
        }
    }

    std::span<const TaxelPose> poses_;
    std::span<const int> active_;
    bool use_grid_ = false;
    double cell_ = 1.0;
    Vec3 origin_{0, 0, 0};
    int64_t dims_[3] = {1, 1, 1};
    std::unordered_map<int64_t, std::vector<int>> cells_;
    mutable std::vector<std::pair<double, int>> candidates_;
};

} // namespace

std::vector<std::pair<int, int>> dynamic_knn_edges(std::span<const TaxelPose> poses,
                                                   std::span<const int> active, int k) {
    std::vector<std::pair<int, int>> out;
    if (active.size() < 2 || k < 1) return out;

    ActiveKnn knn(poses, active);
    std::vector<int> nearest;
    out.reserve(active.size() * k);
    for (int id : active) {
        knn.nearest(id, k, nearest);
        for (int nb : nearest) {
            out.emplace_back(std::min(id, nb), std::max(id, nb));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

GraphEdge make_edge(int slot_a, int slot_b, const TaxelPose& pa, const TaxelPose& pb,
                    bool is_static, double geodesic) {
    GraphEdge e;
    e.a = slot_a;
    e.b = slot_b;
    const Vec3 diff = pb.position - pa.position;
    e.distance = diff.norm();
    e.is_static = is_static;
    e.geodesic = is_static ? geodesic : 0.0;
    e.normal_dot = pa.normal.dot(pb.normal);
    if (e.distance > 1e-12) {
        const Vec3 u = diff / e.distance;
        e.dir_dot_a = pa.normal.dot(u);
        e.dir_dot_b = pb.normal.dot(-u);
    }
    return e;
}

} // namespace

TactileGraph build_graph(const SkinConfig& skin, const StaticEdges& statics,
                         std::span<const TaxelPose> poses, std::span<const float> pressure,
                         double theta_act, int k) {
    TactileGraph g;
    g.node_ids = activated_nodes(pressure, statics, theta_act);
    const int n = g.num_nodes();
    if (n == 0) return g;

    g.pressure.resize(n);
    g.cell_area.resize(n);
    g.positions.resize(n);
    g.normals.resize(n);
    std::unordered_map<int, int> slot;
    slot.reserve(n * 2);
    for (int i = 0; i < n; ++i) {
        const int id = g.node_ids[i];
        slot[id] = i;
        g.pressure[i] = pressure[id];
        g.cell_area[i] = skin.taxels[id].cell_area;
        g.positions[i] = poses[id].position;
        g.normals[i] = poses[id].normal;
    }

    // Static edges with both endpoints present.
    for (const StaticEdges::Edge& e : statics.edges()) {
        auto ia = slot.find(e.a);
        if (ia == slot.end()) continue;
        auto ib = slot.find(e.b);
        if (ib == slot.end()) continue;
        g.edges.push_back(
            make_edge(ia->second, ib->second, poses[e.a], poses[e.b], true, e.rest_length));
    }

    // Dynamic KNN edges; skip pairs already covered by static adjacency.
    for (auto [a, b] : dynamic_knn_edges(poses, g.node_ids, k)) {
        if (statics.has_edge(a, b)) continue;
        g.edges.push_back(make_edge(slot[a], slot[b], poses[a], poses[b], false, 0.0));
    }

    std::sort(g.edges.begin(), g.edges.end(), [](const GraphEdge& l, const GraphEdge& r) {
        return std::tie(l.a, l.b) < std::tie(r.a, r.b);
    });
    return g;
}

TactileGraph build_graph(const SkinConfig& skin, const StaticEdges& statics, const JointState& q,
                         std::span<const float> pressure, double theta_act, int k) {
    const auto poses = taxel_world_poses(skin, q);
    return build_graph(skin, statics, poses, pressure, theta_act, k);
}

void write_graph_dump(std::ostream& out, const TactileGraph& graph) {
    out << "# nodes " << graph.num_nodes() << "\n";
    out << "# id pressure area x y z nx ny nz\n";
    for (int i = 0; i < graph.num_nodes(); ++i) {
        out << graph.node_ids[i] << ' ' << graph.pressure[i] << ' ' << graph.cell_area[i] << ' '
            << graph.positions[i].x() << ' ' << graph.positions[i].y() << ' '
            << graph.positions[i].z() << ' ' << graph.normals[i].x() << ' '
            << graph.normals[i].y() << ' ' << graph.normals[i].z() << "\n";
    }
    out << "# edges " << graph.edges.size() << "\n";
    out << "# i j dist static_flag\n";
    for (const GraphEdge& e : graph.edges) {
        out << graph.node_ids[e.a] << ' ' << graph.node_ids[e.b] << ' ' << e.distance << ' '
            << (e.is_static ? 1 : 0) << "\n";
    }
}

} // namespace taxelgraph
