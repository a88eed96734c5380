#ifndef TAXELGRAPH_DATASET_IO_HPP
#define TAXELGRAPH_DATASET_IO_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "taxelgraph/gesture.hpp"
#include "taxelgraph/synth.hpp"

namespace taxelgraph {

// Recording file, little-endian, magic "TGR1":
//   u32 magic | u32 n_taxels | u32 n_frames | f32 fs | u32 n_joints | u32 n_segments
//   f32 pressures, frame-major (n_frames * n_taxels)
//   f32 joint states per frame (n_frames * n_joints)
//   segment table: per segment u32 start, u32 end, u32 class_id (0xffffffff = unlabeled)
// Round-trips bit-exactly.

void write_recording(const std::string& path, const Recording& rec);
Recording read_recording(const std::string& path);

struct ManifestEntry {
    std::string file;            // empty when the recording failed to synthesize
    std::string gesture;
    int pose_index = -1;
    std::string error;           // failure reason, empty on success
};

struct DatasetManifest {
    uint64_t skin_hash = 0;
    uint64_t seed = 0;
    double fs = 50.0;
    int n_taxels = 0;
    std::array<int, kNumGestureClasses> counts{0, 0, 0, 0};
    std::vector<ManifestEntry> recordings;
};

void write_manifest(const std::string& dir, const DatasetManifest& m);
DatasetManifest read_manifest(const std::string& dir);

/// Sample table produced by `dataset label`: one row per extracted window.
struct SampleIndexEntry {
    int recording = 0;
    int window_start = 0;   // may be negative (zero-padded lead-in)
    int window_end = 0;     // inclusive
    int class_id = 0;
};

void write_sample_index(const std::string& dir, const std::vector<SampleIndexEntry>& samples);
std::vector<SampleIndexEntry> read_sample_index(const std::string& dir);

std::string recording_filename(int index);

} // namespace taxelgraph

#endif
