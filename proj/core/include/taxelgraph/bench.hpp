#ifndef TAXELGRAPH_BENCH_HPP
#define TAXELGRAPH_BENCH_HPP

#include <string>

#include "taxelgraph/predict.hpp"

namespace taxelgraph {

struct StageStats {
    double mean_ms = 0.0;
    double p50_ms = 0.0;
    double p99_ms = 0.0;
};

struct BenchReport {
    StageStats graph_build;
    StageStats forward;        // frame embedding + window readout
    StageStats total;
    int iterations = 0;
    double active_fraction = 0.0;
    std::string machine;
};

/// Synthetic contact load: `active_fraction` of the taxels pressed, grouped
/// into Gaussian blobs that move between iterations.
struct LoadProfile {
    double active_fraction = 0.05;
    int blobs = 4;
    double blob_sigma = 0.02;   // m
    uint64_t seed = 7;
};

/// Times one full recognition step (graph build, frame embedding, strided
/// window readout) over `iterations` synthetic frames at a fixed pose.
BenchReport run_recognition_bench(const SkinConfig& skin, const StaticEdges& statics,
                                  const EgnnModel& model, const LoadProfile& load,
                                  int iterations, const RecognizerConfig& cfg);

std::string machine_descriptor();

} // namespace taxelgraph

#endif
