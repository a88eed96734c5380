#include "taxelgraph/predict.hpp"

#include <cmath>

namespace taxelgraph {

StreamRecognizer::StreamRecognizer(const SkinConfig& skin, const StaticEdges& statics,
                                   const EgnnModel& model, const RecognizerConfig& cfg)
    : skin_(skin), statics_(statics), model_(model), cfg_(cfg) {}

std::optional<GestureEvent> StreamRecognizer::push(std::span<const float> pressure,
                                                   const JointState& q) {
    if (last_q_.size() != q.size() || last_q_ != q) {
        poses_ = taxel_world_poses(skin_, q);
        last_q_ = q;
    }

    float peak = 0.0f;
    for (float p : pressure) peak = std::max(peak, p);

    TactileGraph graph = build_graph(skin_, statics_, poses_, pressure, cfg_.theta_act, cfg_.k);
    embeddings_.push_back(embed_frame(model_, graph));
    const int gap_frames = static_cast<int>(std::lround(cfg_.gap_min_s * cfg_.fs));
    const size_t keep = static_cast<size_t>(cfg_.window) + gap_frames + 2;
    while (embeddings_.size() > keep) embeddings_.pop_front();

    const long now = frame_counter_++;
    std::optional<GestureEvent> event;

    const bool active = peak > cfg_.theta_act;
    if (active) {
        if (!in_gesture_) {
            in_gesture_ = true;
            gesture_start_ = now;
            active_frames_ = 0;
        }
        last_active_ = now;
        ++active_frames_;
    } else if (in_gesture_ && now - last_active_ >= gap_frames) {
        in_gesture_ = false;
        const int len_frames = static_cast<int>(std::lround(cfg_.len_min_s * cfg_.fs));
        if (active_frames_ >= std::max(1, len_frames)) {
            ForwardResult r = classify_ending_at(last_active_);
            GestureEvent e;
            int arg = 0;
            r.probabilities.maxCoeff(&arg);
            e.cls = static_cast<GestureClass>(arg);
            e.confidence = r.probabilities[arg];
            e.frame = now;
            e.gesture_end = last_active_;
            event = e;
        }
    }
    return event;
}

ForwardResult StreamRecognizer::classify_ending_at(long frame) const {
    // Embedding deque index of `frame` (newest frame is frame_counter_-1).
    const long newest = frame_counter_ - 1;
    const long back_off = newest - frame;

    std::vector<VectorXd> strided;
    for (int i = 0; i < cfg_.window; i += cfg_.stride) {
        const long idx = static_cast<long>(embeddings_.size()) - 1 - back_off - i;
        if (idx < 0) {
            strided.push_back(VectorXd::Zero(model_.cfg.hidden));   // cold start: empty frames
        } else {
            strided.push_back(embeddings_[idx]);
        }
    }
    std::reverse(strided.begin(), strided.end());
    return readout_from_embeddings(model_, strided);
}

ForwardResult StreamRecognizer::current() const {
    return classify_ending_at(frame_counter_ - 1);
}

} // namespace taxelgraph
