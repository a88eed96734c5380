#ifndef TAXELGRAPH_PREDICT_HPP
#define TAXELGRAPH_PREDICT_HPP

#include <deque>
#include <optional>

#include "taxelgraph/egnn.hpp"

namespace taxelgraph {

struct GestureEvent {
    GestureClass cls = GestureClass::poke;
    double confidence = 0.0;
    long frame = 0;            // frame index at which the event fired
    long gesture_end = 0;      // last active frame of the gesture
};

struct RecognizerConfig {
    double theta_act = 0.05;
    int k = 8;
    int window = 100;          // FIFO length, frames
    int stride = 1;            // temporal subsampling at readout
    double fs = 50.0;          // frame rate of the incoming stream
    double gap_min_s = 0.4;    // release gap that closes the activity gate
    double len_min_s = 0.06;   // minimum gesture activity
};

/// Streaming recognition: per frame, build the tactile graph, cache its
/// embedding in the FIFO, and emit one event per gesture when the activity
/// gate closes (threshold crossed, then quiet for gap_min). Shared-weight
/// frame embeddings make the per-tick cost one frame, not one window.
class StreamRecognizer {
public:
    StreamRecognizer(const SkinConfig& skin, const StaticEdges& statics, const EgnnModel& model,
                     const RecognizerConfig& cfg);

    std::optional<GestureEvent> push(std::span<const float> pressure, const JointState& q);

    /// Classification of the window ending at the newest frame.
    ForwardResult current() const;

    long frames_seen() const { return frame_counter_; }

private:
    const SkinConfig& skin_;
    const StaticEdges& statics_;
    const EgnnModel& model_;
    RecognizerConfig cfg_;

    std::deque<VectorXd> embeddings_;   // newest at back
    long frame_counter_ = 0;
    JointState last_q_;
    std::vector<TaxelPose> poses_;

    bool in_gesture_ = false;
    long gesture_start_ = 0;
    long last_active_ = -1;
    int active_frames_ = 0;

    ForwardResult classify_ending_at(long frame) const;
};

} // namespace taxelgraph

#endif
