#ifndef TAXELGRAPH_SYNTH_HPP
#define TAXELGRAPH_SYNTH_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "taxelgraph/gesture.hpp"
#include "taxelgraph/skin.hpp"

namespace taxelgraph {

/// One 50 Hz snapshot: normalized per-taxel pressures plus the joint state.
struct PressureFrame {
    double t = 0.0;
    Eigen::VectorXf pressure;   // length N, in [0, 1]
    JointState q;
};

struct LabeledSpan {
    int start_frame = 0;
    int end_frame = 0;          // inclusive
    GestureClass cls = GestureClass::poke;
};

struct Recording {
    double fs = 50.0;
    std::vector<PressureFrame> frames;
    std::vector<LabeledSpan> ground_truth;
};

/// Class-specific script. Fields outside the class's set are ignored.
/// Default sampling ranges: poke sigma 5-12 mm / pulse 0.2-0.4 s;
/// double_pat sigma 15-30 mm / pulses 0.15-0.25 s / gap 0.1-0.3 s;
/// grab plateau 0.5-1.5 s with 3-6 centers; stroke 0.05-0.2 m/s over
/// 50-150 mm; amplitude 0.3-1.0 throughout.
struct GestureScript {
    GestureClass cls = GestureClass::poke;
    int anchor_taxel = 0;
    double amplitude = 0.8;       // A, peak normalized pressure
    double sigma = 0.010;         // Gaussian footprint, m
    double start_time = 1.0;      // seconds from recording start
    double pulse_s = 0.3;         // poke, double_pat
    double gap_s = 0.2;           // double_pat inter-pulse gap
    double plateau_s = 1.0;       // grab hold
    int grab_centers = 4;
    double stroke_speed = 0.1;    // m/s
    double stroke_path_len = 0.1; // m

    double duration() const;
};

struct SynthParams {
    double fs = 50.0;
    double noise_sigma = 0.01;    // additive Gaussian sensor noise
    double theta_label = 0.05;    // ground-truth activity threshold
    double pad_after = 1.0;       // idle tail, s (lead-in is script.start_time)
    double hover = 0.005;         // contact-source height for the facing test, m
    double grip_span = 0.06;      // max jaw opening for fold grabs, m
};

/// A contact point on the skin surface with its outward normal.
struct ContactPoint {
    Vec3 position;
    Vec3 normal;
};

/// Grab contact layout at joint state q: first tries a circumferential ring
/// of snapped taxels around the anchor's wrapped patch, then an opposing
/// thumb/finger split across a fold. nullopt when neither is feasible.
std::optional<std::vector<ContactPoint>> grab_contacts(const SkinConfig& skin,
                                                       const std::vector<TaxelPose>& poses,
                                                       int anchor_taxel, int n_centers,
                                                       double grip_span);

/// Mesh shortest-path taxel sequence from the anchor with geodesic length
/// close to path_len (within 10%, preferring longer candidates drawn via
/// rng_pick in [0,1)). nullopt when the patch cannot host the path.
std::optional<std::vector<int>> stroke_path(const SkinConfig& skin, int anchor_taxel,
                                            double path_len, double rng_pick);

/// Renders one scripted gesture at a stationary pose into a recording:
/// p_i(t) = A * exp(-d_i(t)^2 / (2 sigma^2)) * env(t) * facing_i, with
/// additive sensor noise and clamping to [0, 1]. Ground truth is the span
/// of frames whose noiseless peak exceeds theta_label.
/// Throws std::invalid_argument for unknown anchors or infeasible scripts.
Recording synthesize_gesture(const SkinConfig& skin, const JointState& q,
                             const GestureScript& script, const SynthParams& params,
                             uint64_t seed);

struct DatasetSpec {
    std::array<int, kNumGestureClasses> counts{0, 0, 0, 0};
    int num_poses = 12;
    /// Per-joint sampling range; single entry broadcasts to all joints.
    std::vector<std::pair<double, double>> joint_ranges{{-1.9, 1.9}};
    SynthParams synth;
};

struct DatasetRecording {
    int index = 0;
    GestureClass cls = GestureClass::poke;
    int pose_index = 0;
    JointState q;
    Recording recording;
};

struct RecordingError {
    int index = 0;
    std::string reason;
};

/// The stationary pose pool shared by all recordings of a dataset.
std::vector<JointState> sample_pose_pool(const SkinConfig& skin, const DatasetSpec& spec,
                                         uint64_t seed);

/// Synthesizes recording `index` of the dataset. Class assignment is
/// count-ordered (all poke recordings first, then double_pat, ...); every
/// random draw comes from Rng(seed + index), so recordings can be produced
/// in any order or in parallel with identical results.
DatasetRecording synthesize_recording_at(const SkinConfig& skin, const DatasetSpec& spec,
                                         uint64_t seed, int index,
                                         const std::vector<JointState>& pose_pool);

/// Runs the whole dataset through `sink` (in index order). Infeasible
/// recordings are reported in `errors` and skipped; generation continues.
void synthesize_dataset(const SkinConfig& skin, const DatasetSpec& spec, uint64_t seed,
                        const std::function<void(DatasetRecording&&)>& sink,
                        std::vector<RecordingError>& errors);

/// Convenience wrapper collecting everything in memory (small datasets).
std::vector<DatasetRecording> synthesize_dataset(const SkinConfig& skin, const DatasetSpec& spec,
                                                 uint64_t seed,
                                                 std::vector<RecordingError>* errors = nullptr);

} // namespace taxelgraph

#endif
