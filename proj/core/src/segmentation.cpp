#include "taxelgraph/segmentation.hpp"

#include <cmath>

namespace taxelgraph {

std::vector<Segment> auto_segment_trace(const std::vector<float>& peak, double fs,
                                        double theta_label, double gap_min_s, double len_min_s) {
    const int n = static_cast<int>(peak.size());
    const int gap_min = static_cast<int>(std::lround(gap_min_s * fs));
    const int len_min = static_cast<int>(std::lround(len_min_s * fs));

    // Maximal active runs.
    std::vector<Segment> runs;
    int start = -1;
    for (int f = 0; f < n; ++f) {
        const bool active = peak[f] > theta_label;
        if (active && start < 0) start = f;
        if (!active && start >= 0) {
            runs.push_back({start, f - 1});
            start = -1;
        }
    }
    if (start >= 0) runs.push_back({start, n - 1});

    // Isolated sub-len_min spikes are sensor noise; remove them before
    // merging so they cannot stretch a real segment's boundary.
    std::vector<Segment> kept;
    for (const Segment& r : runs) {
        if (r.length() >= len_min) kept.push_back(r);
    }

    // Merge across short inactive gaps (double-pat stays one segment).
    std::vector<Segment> merged;
    for (const Segment& r : kept) {
        if (!merged.empty() && r.start_frame - merged.back().end_frame - 1 < gap_min) {
            merged.back().end_frame = r.end_frame;
        } else {
            merged.push_back(r);
        }
    }

    std::vector<Segment> out;
    for (const Segment& s : merged) {
        if (s.length() >= len_min) out.push_back(s);
    }
    return out;
}

std::vector<Segment> auto_segment(const Recording& rec, double theta_label, double gap_min_s,
                                  double len_min_s) {
    std::vector<float> peak(rec.frames.size(), 0.0f);
    for (size_t f = 0; f < rec.frames.size(); ++f) {
        const auto& p = rec.frames[f].pressure;
        peak[f] = p.size() > 0 ? p.maxCoeff() : 0.0f;
    }
    return auto_segment_trace(peak, rec.fs, theta_label, gap_min_s, len_min_s);
}

std::vector<PressureFrame> materialize_window(const Recording& rec, int start, int end) {
    const int n = static_cast<int>(rec.frames.size());
    const int n_taxels = n > 0 ? static_cast<int>(rec.frames[0].pressure.size()) : 0;
    const JointState q0 = n > 0 ? rec.frames[0].q : JointState();
    std::vector<PressureFrame> out;
    out.reserve(end - start + 1);
    for (int f = start; f <= end; ++f) {
        if (f < 0 || f >= n) {
            PressureFrame pad;
            pad.t = f / rec.fs;
            pad.pressure = Eigen::VectorXf::Zero(n_taxels);
            pad.q = q0;
            out.push_back(std::move(pad));
        } else {
            out.push_back(rec.frames[f]);
        }
    }
    return out;
}

std::vector<GestureSample> extract_samples(const Recording& rec, const std::vector<Segment>& segs,
                                           int window, int recording_id,
                                           std::vector<std::string>* warnings) {
    std::vector<GestureSample> out;
    for (const Segment& seg : segs) {
        // Majority-overlap label from the ground truth.
        int best_overlap = 0;
        bool tie = false;
        GestureClass label = GestureClass::poke;
        for (const LabeledSpan& gt : rec.ground_truth) {
            const int lo = std::max(seg.start_frame, gt.start_frame);
            const int hi = std::min(seg.end_frame, gt.end_frame);
            const int overlap = hi - lo + 1;
            if (overlap <= 0) continue;
            if (overlap > best_overlap) {
                best_overlap = overlap;
                label = gt.cls;
                tie = false;
            } else if (overlap == best_overlap && gt.cls != label) {
                tie = true;
            }
        }
        if (best_overlap == 0 || tie) {
            if (warnings) {
                warnings->push_back("recording " + std::to_string(recording_id) + " segment [" +
                                    std::to_string(seg.start_frame) + "," +
                                    std::to_string(seg.end_frame) +
                                    (tie ? "]: ambiguous ground-truth overlap, skipped"
                                         : "]: no ground-truth overlap, skipped"));
            }
            continue;
        }

        GestureSample sample;
        sample.label = label;
        sample.source_recording = recording_id;
        sample.source_segment = seg;
        sample.frames = materialize_window(rec, seg.end_frame - window + 1, seg.end_frame);
        out.push_back(std::move(sample));
    }
    return out;
}

} // namespace taxelgraph
