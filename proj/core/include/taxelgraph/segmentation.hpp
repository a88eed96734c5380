#ifndef TAXELGRAPH_SEGMENTATION_HPP
#define TAXELGRAPH_SEGMENTATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "taxelgraph/synth.hpp"

namespace taxelgraph {

struct Segment {
    int start_frame = 0;
    int end_frame = 0;   // inclusive
    int length() const { return end_frame - start_frame + 1; }
};

/// Threshold segmentation of a recording: frames whose max-over-taxels
/// pressure exceeds theta_label are active; maximal active runs shorter
/// than len_min are discarded as noise spikes, runs separated by a gap
/// shorter than gap_min merge (keeps double-pat whole), and merged
/// segments shorter than len_min are dropped.
std::vector<Segment> auto_segment(const Recording& rec, double theta_label, double gap_min_s,
                                  double len_min_s);

/// Same, operating on a precomputed per-frame peak trace.
std::vector<Segment> auto_segment_trace(const std::vector<float>& peak, double fs,
                                        double theta_label, double gap_min_s, double len_min_s);

/// Fixed-length labeled training window (W frames ending at a segment end).
struct GestureSample {
    std::vector<PressureFrame> frames;
    GestureClass label = GestureClass::poke;
    int source_recording = -1;
    Segment source_segment;
};

/// One sample per segment: the W-frame window ending at the segment's last
/// frame, left-padded with zero-pressure frames at the recording's joint
/// state when the segment starts early. Labels come from the ground-truth
/// span with majority overlap; ambiguous ties are skipped with a warning.
std::vector<GestureSample> extract_samples(const Recording& rec, const std::vector<Segment>& segs,
                                           int window, int recording_id,
                                           std::vector<std::string>* warnings = nullptr);

/// Frames [start, end] of the recording, zero-padded outside its range.
std::vector<PressureFrame> materialize_window(const Recording& rec, int start, int end);

} // namespace taxelgraph

#endif
