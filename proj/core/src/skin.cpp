#include "taxelgraph/skin.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "taxelgraph/config_io.hpp"

namespace taxelgraph {

std::vector<RigidTransform> forward_kinematics(const KinematicChain& chain,
                                               const JointState& q) {
    const int n = chain.num_links();
    if (q.size() != n) {
        throw std::invalid_argument("joint state has " + std::to_string(q.size()) +
                                    " angles, chain has " + std::to_string(n) + " joints");
    }
    std::vector<RigidTransform> links(n);
    RigidTransform acc = chain.base;
    for (int i = 0; i < n; ++i) {
        acc = acc * chain.joints[i].origin * axis_angle(chain.joints[i].axis, q[i]);
        links[i] = acc;
    }
    return links;
}

std::vector<TaxelPose> taxel_world_poses(const SkinConfig& skin, const JointState& q) {
    const auto links = forward_kinematics(skin.chain, q);
    std::vector<TaxelPose> poses(skin.taxels.size());
    for (const Patch& patch : skin.patches) {
        const RigidTransform frame = links.at(patch.link_index) * patch.mount;
        for (int id : patch.taxel_ids) {
            const Taxel& t = skin.taxels.at(id);
            poses[id].position = frame.apply_point(t.local_position);
            poses[id].normal = frame.apply_direction(t.local_normal).normalized();
        }
    }
    return poses;
}

namespace {

const Patch& patch_of(const SkinConfig& skin, int taxel_id) {
    const Taxel& t = skin.taxels.at(taxel_id);
    for (const Patch& p : skin.patches) {
        if (p.patch_id == t.patch_id) return p;
    }
    throw std::out_of_range("taxel " + std::to_string(taxel_id) + " references missing patch");
}

} // namespace

std::optional<double> geometric_distance(const SkinConfig& skin, int taxel_a, int taxel_b) {
    if (taxel_a < 0 || taxel_a >= skin.num_taxels() || taxel_b < 0 ||
        taxel_b >= skin.num_taxels()) {
        throw std::out_of_range("unknown taxel id");
    }
    if (taxel_a == taxel_b) return 0.0;
    const Taxel& ta = skin.taxels[taxel_a];
    const Taxel& tb = skin.taxels[taxel_b];
    if (ta.patch_id != tb.patch_id) return std::nullopt;

    const Patch& patch = patch_of(skin, taxel_a);

    // Dijkstra over the patch mesh, early exit at the target.
    std::unordered_map<int, std::vector<std::pair<int, double>>> adj;
    for (const MeshEdge& e : patch.adjacency) {
        adj[e.a].emplace_back(e.b, e.rest_length);
        adj[e.b].emplace_back(e.a, e.rest_length);
    }
    std::unordered_map<int, double> dist;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[taxel_a] = 0.0;
    heap.emplace(0.0, taxel_a);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (u == taxel_b) return d;
        auto it = dist.find(u);
        if (it != dist.end() && d > it->second) continue;
        for (auto [v, w] : adj[u]) {
            const double nd = d + w;
            auto dv = dist.find(v);
            if (dv == dist.end() || nd < dv->second) {
                dist[v] = nd;
                heap.emplace(nd, v);
            }
        }
    }
    return std::nullopt;   // same patch but mesh disconnected (invalid config)
}

std::vector<std::string> validate_skin(const SkinConfig& skin) {
    std::vector<std::string> errors;
    auto fail = [&errors](std::string msg) { errors.push_back(std::move(msg)); };

    const int n = skin.num_taxels();

    // Taxel table: dense ids, unit normals, positive areas.
    for (int i = 0; i < n; ++i) {
        const Taxel& t = skin.taxels[i];
        if (t.id != i) {
            fail("taxel at index " + std::to_string(i) + " has id " + std::to_string(t.id) +
                 " (ids must be dense 0..N-1)");
        }
        if (std::abs(t.local_normal.norm() - 1.0) > 1e-9) {
            fail("taxel " + std::to_string(t.id) + ": local_normal is not unit length");
        }
        if (!(t.cell_area > 0.0)) {
            fail("taxel " + std::to_string(t.id) + ": cell_area must be > 0");
        }
    }

    for (const Joint& j : skin.chain.joints) {
        if (std::abs(j.axis.norm() - 1.0) > 1e-9) {
            fail("chain joint axis is not unit length");
        }
    }

    std::vector<int> owner(n, -1);
    std::unordered_set<int> patch_ids;
    for (const Patch& p : skin.patches) {
        if (!patch_ids.insert(p.patch_id).second) {
            fail("duplicate patch id " + std::to_string(p.patch_id));
        }
        if (p.link_index < 0 || p.link_index >= skin.chain.num_links()) {
            fail("patch " + std::to_string(p.patch_id) + ": link_index " +
                 std::to_string(p.link_index) + " out of range");
            continue;
        }
        std::unordered_set<int> members;
        for (int id : p.taxel_ids) {
            if (id < 0 || id >= n) {
                fail("patch " + std::to_string(p.patch_id) + ": taxel id " +
                     std::to_string(id) + " out of range");
                continue;
            }
            if (owner[id] != -1) {
                fail("taxel " + std::to_string(id) + " appears in patches " +
                     std::to_string(owner[id]) + " and " + std::to_string(p.patch_id));
            }
            owner[id] = p.patch_id;
            members.insert(id);
            if (skin.taxels[id].patch_id != p.patch_id) {
                fail("taxel " + std::to_string(id) + ": patch_id field disagrees with patch " +
                     std::to_string(p.patch_id));
            }
        }

        std::unordered_map<int, std::vector<int>> adj;
        for (const MeshEdge& e : p.adjacency) {
            if (!members.count(e.a) || !members.count(e.b)) {
                fail("patch " + std::to_string(p.patch_id) + ": adjacency edge (" +
                     std::to_string(e.a) + "," + std::to_string(e.b) +
                     ") references a taxel outside the patch");
                continue;
            }
            const double d =
                (skin.taxels[e.a].local_position - skin.taxels[e.b].local_position).norm();
            if (std::abs(d - e.rest_length) > 1e-9) {
                fail("patch " + std::to_string(p.patch_id) + ": edge (" + std::to_string(e.a) +
                     "," + std::to_string(e.b) + ") rest_length " + std::to_string(e.rest_length) +
                     " != patch-frame distance " + std::to_string(d));
            }
            adj[e.a].push_back(e.b);
            adj[e.b].push_back(e.a);
        }

        // Connectivity: one perceptual surface per patch.
        if (!p.taxel_ids.empty()) {
            std::unordered_set<int> seen;
            std::vector<int> stack{p.taxel_ids.front()};
            seen.insert(p.taxel_ids.front());
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (int v : adj[u]) {
                    if (seen.insert(v).second) stack.push_back(v);
                }
            }
            if (seen.size() != members.size()) {
                fail("patch " + std::to_string(p.patch_id) + ": adjacency mesh is disconnected (" +
                     std::to_string(seen.size()) + "/" + std::to_string(members.size()) +
                     " taxels reachable)");
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        if (owner[i] == -1) {
            fail("taxel " + std::to_string(i) + " is not a member of any patch");
        }
    }
    return errors;
}

uint64_t skin_config_hash(const SkinConfig& skin) {
    // FNV-1a over the canonical JSON serialization.
    const std::string text = skin_to_json(skin);
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace taxelgraph
