#ifndef TAXELGRAPH_BASELINES_HPP
#define TAXELGRAPH_BASELINES_HPP

#include <vector>

#include "taxelgraph/egnn.hpp"
#include "taxelgraph/train.hpp"

namespace taxelgraph {

/// Windowed pressures flattened to one vector, no pose information.
struct FlatSample {
    Eigen::VectorXf vec;
    int label = 0;
};

/// Concatenates every stride-th frame's pressures in time order (frames
/// 0, stride, 2*stride, ...).
FlatSample flatten(const std::vector<PressureFrame>& frames, int label, int stride);

/// Majority vote among the k_nn nearest training vectors by Euclidean
/// distance; vote ties resolve to the smallest class id, neighbor-distance
/// ties to the earlier training index.
int knn_classify(const std::vector<FlatSample>& train, const Eigen::VectorXf& query, int k_nn);

struct MlpBaselineConfig {
    int hidden1 = 256;
    int hidden2 = 64;
    double lr = 1e-3;
    int batch_size = 32;
    int epochs = 40;
    uint64_t seed = 1;
    double l2 = 1e-6;
    double val_fraction = 0.15;
    double divergence_loss = 1e3;
};

struct MlpBaseline {
    Mlp net;
    std::vector<EpochStats> history;
    bool diverged = false;
};

/// Two-hidden-layer perceptron on the flattened vectors, trained with the
/// same loss, Adam, and determinism contract as the graph model.
MlpBaseline mlp_train(const std::vector<FlatSample>& train, const MlpBaselineConfig& cfg);

int mlp_classify(const MlpBaseline& model, const Eigen::VectorXf& query);

double mlp_accuracy(const MlpBaseline& model, const std::vector<FlatSample>& samples);

} // namespace taxelgraph

#endif
