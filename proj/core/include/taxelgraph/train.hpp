#ifndef TAXELGRAPH_TRAIN_HPP
#define TAXELGRAPH_TRAIN_HPP

#include <cstdint>
#include <vector>

#include "taxelgraph/egnn.hpp"
#include "taxelgraph/segmentation.hpp"

namespace taxelgraph {

/// Adam with bias correction, operating on the flat parameter views.
struct AdamState {
    VectorXd m, v;
    int64_t t = 0;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    void step(std::vector<ParamView> params, std::vector<ParamView> grads, double lr);
};

struct TrainConfig {
    double lr = 1e-3;
    int batch_size = 16;
    int epochs = 30;
    uint64_t seed = 1;
    double l2 = 1e-6;
    double val_fraction = 0.15;
    int stride = 1;              // temporal subsampling of the 100-frame window
    double theta_act = 0.05;     // graph construction
    int k = 8;
    double early_stop_val_acc = 2.0;   // > 1 disables early stopping
    double divergence_loss = 1e3;
};

struct EpochStats {
    int epoch = 0;
    double train_acc = 0.0;
    double val_acc = 0.0;
    double loss = 0.0;
};

struct TrainResult {
    EgnnModel model;
    std::vector<EpochStats> history;
    bool diverged = false;
};

/// One labeled window of dense frames (graphs are rebuilt on the fly).
struct TrainSample {
    std::vector<PressureFrame> frames;
    int label = 0;
};

/// Graphs for the strided subset of a dense window (newest frame kept).
GraphWindow build_strided_window(const SkinConfig& skin, const StaticEdges& statics,
                                 const std::vector<PressureFrame>& frames, double theta_act,
                                 int k, int stride);

/// Deterministic mini-batch Adam training with a seeded shuffle split.
/// Emits per-epoch train/validation accuracy; halts on divergence.
TrainResult train_egnn(const SkinConfig& skin, const StaticEdges& statics, const EgnnConfig& cfg,
                       const std::vector<TrainSample>& samples, const TrainConfig& train_cfg);

/// Argmax accuracy of the model over the samples.
double evaluate_egnn(const EgnnModel& model, const SkinConfig& skin, const StaticEdges& statics,
                     const std::vector<TrainSample>& samples, double theta_act, int k, int stride);

std::vector<int> predict_egnn(const EgnnModel& model, const SkinConfig& skin,
                              const StaticEdges& statics, const std::vector<TrainSample>& samples,
                              double theta_act, int k, int stride);

} // namespace taxelgraph

#endif
