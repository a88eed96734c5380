#include "taxelgraph/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

#include "taxelgraph/rng.hpp"

namespace taxelgraph {

namespace {

double raised_cosine(double t, double t0, double width) {
    const double u = (t - t0) / width;
    if (u < 0.0 || u > 1.0) return 0.0;
    return 0.5 * (1.0 - std::cos(2.0 * M_PI * u));
}

double plateau(double t, double t0, double hold, double ramp) {
    const double u = t - t0;
    if (u < 0.0 || u > hold) return 0.0;
    if (u < ramp) return 0.5 * (1.0 - std::cos(M_PI * u / ramp));
    if (u > hold - ramp) return 0.5 * (1.0 - std::cos(M_PI * (hold - u) / ramp));
    return 1.0;
}

double stroke_duration(const GestureScript& s) {
    return s.stroke_path_len / std::max(s.stroke_speed, 1e-6);
}

const Patch& patch_of(const SkinConfig& skin, int taxel_id) {
    const int pid = skin.taxels.at(taxel_id).patch_id;
    for (const Patch& p : skin.patches) {
        if (p.patch_id == pid) return p;
    }
    throw std::invalid_argument("taxel " + std::to_string(taxel_id) + " has no patch");
}

} // namespace

double GestureScript::duration() const {
    switch (cls) {
        case GestureClass::poke: return pulse_s;
        case GestureClass::double_pat: return 2.0 * pulse_s + gap_s;
        case GestureClass::grab: return plateau_s;
        case GestureClass::stroke: return stroke_duration(*this);
    }
    return 0.0;
}

std::optional<std::vector<ContactPoint>> grab_contacts(const SkinConfig& skin,
                                                       const std::vector<TaxelPose>& poses,
                                                       int anchor_taxel, int n_centers,
                                                       double grip_span) {
    if (anchor_taxel < 0 || anchor_taxel >= skin.num_taxels()) {
        throw std::invalid_argument("unknown anchor taxel " + std::to_string(anchor_taxel));
    }
    const Patch& patch = patch_of(skin, anchor_taxel);
    const Taxel& anchor = skin.taxels[anchor_taxel];

    // Ring mode: rotate the anchor about the patch z axis and snap each
    // ideal finger position to the nearest patch taxel. Works only for
    // circumferential bands (flat patches fail the normal-spread check).
    {
        double median_rest = 0.010;
        if (!patch.adjacency.empty()) {
            std::vector<double> rest;
            rest.reserve(patch.adjacency.size());
            for (const MeshEdge& e : patch.adjacency) rest.push_back(e.rest_length);
            std::nth_element(rest.begin(), rest.begin() + rest.size() / 2, rest.end());
            median_rest = rest[rest.size() / 2];
        }
        const double snap_tol = 1.3 * median_rest;

        std::vector<int> ring;
        bool ok = true;
        for (int j = 0; j < n_centers && ok; ++j) {
            const double ang = 2.0 * M_PI * j / n_centers;
            const Eigen::AngleAxisd rot(ang, Vec3::UnitZ());
            const Vec3 ideal = rot * anchor.local_position;
            int best = -1;
            double best_d = std::numeric_limits<double>::max();
            for (int id : patch.taxel_ids) {
                const double d = (skin.taxels[id].local_position - ideal).norm();
                if (d < best_d) {
                    best_d = d;
                    best = id;
                }
            }
            if (best < 0 || best_d > snap_tol ||
                std::find(ring.begin(), ring.end(), best) != ring.end()) {
                ok = false;
            } else {
                ring.push_back(best);
            }
        }
        if (ok) {
            double min_dot = 1.0;
            for (size_t i = 0; i < ring.size(); ++i) {
                for (size_t j = i + 1; j < ring.size(); ++j) {
                    min_dot = std::min(min_dot, skin.taxels[ring[i]].local_normal.dot(
                                                    skin.taxels[ring[j]].local_normal));
                }
            }
            if (min_dot < -0.1) {
                std::vector<ContactPoint> out;
                for (int id : ring) out.push_back({poses[id].position, poses[id].normal});
                return out;
            }
        }
    }

    // Fold mode: thumb on the anchor, fingers on the nearest opposing
    // surface within the grip span (taxels of other patches facing back).
    {
        const TaxelPose& ap = poses[anchor_taxel];
        std::vector<std::pair<double, int>> opposing;
        for (const Taxel& t : skin.taxels) {
            if (t.patch_id == anchor.patch_id) continue;
            const TaxelPose& tp = poses[t.id];
            const double d = (tp.position - ap.position).norm();
            if (d > grip_span || d < 1e-9) continue;
            if (tp.normal.dot(ap.normal) > -0.5) continue;      // not facing back
            if (ap.normal.dot(tp.position - ap.position) <= 0.0) continue;  // behind the surface
            opposing.emplace_back(d, t.id);
        }
        if (static_cast<int>(opposing.size()) >= n_centers - 1) {
            std::sort(opposing.begin(), opposing.end());
            std::vector<ContactPoint> out;
            out.push_back({ap.position, ap.normal});
            for (int j = 0; j < n_centers - 1; ++j) {
                const int id = opposing[j].second;
                out.push_back({poses[id].position, poses[id].normal});
            }
            return out;
        }
    }
    return std::nullopt;
}

std::optional<std::vector<int>> stroke_path(const SkinConfig& skin, int anchor_taxel,
                                            double path_len, double rng_pick) {
    if (anchor_taxel < 0 || anchor_taxel >= skin.num_taxels()) {
        throw std::invalid_argument("unknown anchor taxel " + std::to_string(anchor_taxel));
    }
    const Patch& patch = patch_of(skin, anchor_taxel);

    std::map<int, std::vector<std::pair<int, double>>> adj;
    for (const MeshEdge& e : patch.adjacency) {
        adj[e.a].emplace_back(e.b, e.rest_length);
        adj[e.b].emplace_back(e.a, e.rest_length);
    }
    std::map<int, double> dist;
    std::map<int, int> pred;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[anchor_taxel] = 0.0;
    heap.emplace(0.0, anchor_taxel);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (auto [v, w] : adj[u]) {
            const double nd = d + w;
            auto it = dist.find(v);
            if (it == dist.end() || nd < it->second) {
                dist[v] = nd;
                pred[v] = u;
                heap.emplace(nd, v);
            }
        }
    }

    std::vector<int> candidates;
    for (auto [id, d] : dist) {
        if (d >= 0.9 * path_len && d <= 1.1 * path_len) candidates.push_back(id);
    }
    if (candidates.empty()) return std::nullopt;
    const int target =
        candidates[std::min<size_t>(candidates.size() - 1,
                                    static_cast<size_t>(rng_pick * candidates.size()))];

    std::vector<int> path{target};
    while (path.back() != anchor_taxel) path.push_back(pred.at(path.back()));
    std::reverse(path.begin(), path.end());
    return path;
}

Recording synthesize_gesture(const SkinConfig& skin, const JointState& q,
                             const GestureScript& script, const SynthParams& params,
                             uint64_t seed) {
    if (script.anchor_taxel < 0 || script.anchor_taxel >= skin.num_taxels()) {
        throw std::invalid_argument("unknown anchor taxel " +
                                    std::to_string(script.anchor_taxel));
    }
    const auto poses = taxel_world_poses(skin, q);
    const int n = skin.num_taxels();

    // Resolve the contact layout.
    std::vector<ContactPoint> contacts;              // stationary classes
    std::vector<Vec3> path_points;                   // stroke polyline
    std::vector<Vec3> path_normals;
    std::vector<double> path_arclen;
    switch (script.cls) {
        case GestureClass::poke:
        case GestureClass::double_pat:
            contacts.push_back(
                {poses[script.anchor_taxel].position, poses[script.anchor_taxel].normal});
            break;
        case GestureClass::grab: {
            auto layout = grab_contacts(skin, poses, script.anchor_taxel, script.grab_centers,
                                        params.grip_span);
            if (!layout) {
                throw std::invalid_argument("grab infeasible at taxel " +
                                            std::to_string(script.anchor_taxel) +
                                            ": no circumferential band or opposing surface");
            }
            contacts = std::move(*layout);
            break;
        }
        case GestureClass::stroke: {
            Rng pick_rng(seed ^ 0x9e3779b97f4a7c15ull);
            auto path =
                stroke_path(skin, script.anchor_taxel, script.stroke_path_len, pick_rng.uniform());
            if (!path) {
                throw std::invalid_argument(
                    "stroke path of " + std::to_string(script.stroke_path_len) +
                    " m leaves the patch of taxel " + std::to_string(script.anchor_taxel));
            }
            double acc = 0.0;
            for (size_t i = 0; i < path->size(); ++i) {
                const int id = (*path)[i];
                path_points.push_back(poses[id].position);
                path_normals.push_back(poses[id].normal);
                if (i > 0) acc += (path_points[i] - path_points[i - 1]).norm();
                path_arclen.push_back(acc);
            }
            break;
        }
    }

    const double duration = script.duration();
    const double total = script.start_time + duration + params.pad_after;
    const int n_frames = std::max(1, static_cast<int>(std::lround(total * params.fs)));

    auto envelope = [&](double t) -> double {
        const double u = t - script.start_time;
        switch (script.cls) {
            case GestureClass::poke: return raised_cosine(t, script.start_time, script.pulse_s);
            case GestureClass::double_pat:
                return std::max(
                    raised_cosine(t, script.start_time, script.pulse_s),
                    raised_cosine(t, script.start_time + script.pulse_s + script.gap_s,
                                  script.pulse_s));
            case GestureClass::grab:
                return plateau(t, script.start_time, script.plateau_s,
                               std::min(0.1, script.plateau_s / 4.0));
            case GestureClass::stroke:
                return plateau(t, script.start_time, duration, std::min(0.1, duration / 4.0));
        }
        (void)u;
        return 0.0;
    };

    auto stroke_contact = [&](double t) -> ContactPoint {
        const double s =
            std::clamp((t - script.start_time) * script.stroke_speed, 0.0, path_arclen.back());
        auto it = std::upper_bound(path_arclen.begin(), path_arclen.end(), s);
        size_t seg = std::min<size_t>(path_arclen.size() - 1,
                                      static_cast<size_t>(it - path_arclen.begin()));
        if (seg == 0) return {path_points[0], path_normals[0]};
        const double s0 = path_arclen[seg - 1], s1 = path_arclen[seg];
        const double w = s1 > s0 ? (s - s0) / (s1 - s0) : 0.0;
        const Vec3 p = (1.0 - w) * path_points[seg - 1] + w * path_points[seg];
        return {p, path_normals[w < 0.5 ? seg - 1 : seg]};
    };

    Rng noise_rng(seed);
    Recording rec;
    rec.fs = params.fs;
    rec.frames.resize(n_frames);

    int first_active = -1, last_active = -1;
    const double inv_two_sigma2 = 1.0 / (2.0 * script.sigma * script.sigma);

    std::vector<ContactPoint> frame_contacts;
    for (int f = 0; f < n_frames; ++f) {
        PressureFrame& frame = rec.frames[f];
        frame.t = f / params.fs;
        frame.q = q;
        frame.pressure.resize(n);

        const double env = envelope(frame.t);
        double peak = 0.0;

        frame_contacts.clear();
        if (env > 0.0) {
            if (script.cls == GestureClass::stroke) {
                frame_contacts.push_back(stroke_contact(frame.t));
            } else {
                frame_contacts = contacts;
            }
        }

        for (int i = 0; i < n; ++i) {
            double clean = 0.0;
            if (env > 0.0) {
                double best = 0.0;
                for (const ContactPoint& c : frame_contacts) {
                    const Vec3 source = c.position + params.hover * c.normal;
                    if (poses[i].normal.dot(source - poses[i].position) <= 0.0) continue;
                    const double d2 = (poses[i].position - c.position).squaredNorm();
                    best = std::max(best, std::exp(-d2 * inv_two_sigma2));
                }
                clean = script.amplitude * env * best;
                peak = std::max(peak, clean);
            }
            const double noisy = clean + params.noise_sigma * noise_rng.normal();
            frame.pressure[i] = static_cast<float>(std::clamp(noisy, 0.0, 1.0));
        }

        if (peak > params.theta_label) {
            if (first_active < 0) first_active = f;
            last_active = f;
        }
    }

    if (first_active >= 0) {
        rec.ground_truth.push_back({first_active, last_active, script.cls});
    }
    return rec;
}

std::vector<JointState> sample_pose_pool(const SkinConfig& skin, const DatasetSpec& spec,
                                         uint64_t seed) {
    Rng rng(seed ^ 0xda3e39cb94b95bdbull);
    const int nj = skin.chain.num_links();
    auto range_for = [&](int j) -> std::pair<double, double> {
        if (spec.joint_ranges.empty()) return {-1.9, 1.9};
        if (spec.joint_ranges.size() == 1) return spec.joint_ranges[0];
        return spec.joint_ranges.at(j);
    };
    std::vector<JointState> pool;
    pool.reserve(spec.num_poses);
    for (int p = 0; p < spec.num_poses; ++p) {
        JointState q(nj);
        for (int j = 0; j < nj; ++j) {
            auto [lo, hi] = range_for(j);
            q[j] = rng.uniform(lo, hi);
        }
        pool.push_back(std::move(q));
    }
    return pool;
}

namespace {

GestureClass class_for_index(const DatasetSpec& spec, int index) {
    int acc = 0;
    for (int c = 0; c < kNumGestureClasses; ++c) {
        acc += spec.counts[c];
        if (index < acc) return static_cast<GestureClass>(c);
    }
    throw std::out_of_range("recording index beyond dataset counts");
}

} // namespace

DatasetRecording synthesize_recording_at(const SkinConfig& skin, const DatasetSpec& spec,
                                         uint64_t seed, int index,
                                         const std::vector<JointState>& pose_pool) {
    Rng rng(seed + static_cast<uint64_t>(index));
    DatasetRecording out;
    out.index = index;
    out.cls = class_for_index(spec, index);
    out.pose_index = static_cast<int>(rng.uniform_int(0, pose_pool.size() - 1));
    out.q = pose_pool.at(out.pose_index);

    const auto poses = taxel_world_poses(skin, out.q);

    GestureScript script;
    script.cls = out.cls;
    script.amplitude = rng.uniform(0.3, 1.0);
    script.start_time = 1.0;
    switch (out.cls) {
        case GestureClass::poke:
            script.sigma = rng.uniform(0.005, 0.012);
            script.pulse_s = rng.uniform(0.2, 0.4);
            break;
        case GestureClass::double_pat:
            script.sigma = rng.uniform(0.015, 0.030);
            script.pulse_s = rng.uniform(0.15, 0.25);
            script.gap_s = rng.uniform(0.1, 0.3);
            break;
        case GestureClass::grab:
            script.sigma = rng.uniform(0.008, 0.014);
            script.plateau_s = rng.uniform(0.5, 1.5);
            script.grab_centers = static_cast<int>(rng.uniform_int(3, 6));
            break;
        case GestureClass::stroke:
            script.sigma = rng.uniform(0.008, 0.015);
            script.stroke_speed = rng.uniform(0.05, 0.2);
            script.stroke_path_len = rng.uniform(0.05, 0.15);
            break;
    }

    // Rejection-sample a feasible anchor.
    const int max_tries = 60;
    std::string last_error = "no feasible anchor";
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        script.anchor_taxel = static_cast<int>(rng.uniform_int(0, skin.num_taxels() - 1));
        switch (out.cls) {
            case GestureClass::grab:
                if (!grab_contacts(skin, poses, script.anchor_taxel, script.grab_centers,
                                   spec.synth.grip_span)) {
                    last_error = "grab infeasible at sampled anchors";
                    continue;
                }
                break;
            case GestureClass::stroke:
                if (!stroke_path(skin, script.anchor_taxel, script.stroke_path_len, 0.0)) {
                    last_error = "stroke path length unavailable at sampled anchors";
                    continue;
                }
                break;
            default: break;
        }
        out.recording = synthesize_gesture(skin, out.q, script, spec.synth,
                                           seed + static_cast<uint64_t>(index));
        return out;
    }
    throw std::runtime_error("recording " + std::to_string(index) + " (" +
                             to_string(out.cls) + "): " + last_error);
}

void synthesize_dataset(const SkinConfig& skin, const DatasetSpec& spec, uint64_t seed,
                        const std::function<void(DatasetRecording&&)>& sink,
                        std::vector<RecordingError>& errors) {
    const auto pool = sample_pose_pool(skin, spec, seed);
    int total = 0;
    for (int c : spec.counts) total += c;
    for (int i = 0; i < total; ++i) {
        try {
            sink(synthesize_recording_at(skin, spec, seed, i, pool));
        } catch (const std::exception& e) {
            errors.push_back({i, e.what()});
        }
    }
}

std::vector<DatasetRecording> synthesize_dataset(const SkinConfig& skin, const DatasetSpec& spec,
                                                 uint64_t seed,
                                                 std::vector<RecordingError>* errors) {
    std::vector<DatasetRecording> out;
    std::vector<RecordingError> local;
    synthesize_dataset(
        skin, spec, seed, [&out](DatasetRecording&& rec) { out.push_back(std::move(rec)); },
        errors ? *errors : local);
    return out;
}

} // namespace taxelgraph
