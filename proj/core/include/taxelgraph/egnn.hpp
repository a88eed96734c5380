#ifndef TAXELGRAPH_EGNN_HPP
#define TAXELGRAPH_EGNN_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "taxelgraph/gesture.hpp"
#include "taxelgraph/graph.hpp"

namespace taxelgraph {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double sigmoid(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}
/// Sigmoid-weighted linear unit (the model's smooth nonlinearity).
inline double silu(double x) { return x * sigmoid(x); }
inline double silu_grad(double x) {
    const double s = sigmoid(x);
    return s * (1.0 + x * (1.0 - s));
}

/// Small dense MLP on batched rows. Layers without biases keep a zero-size
/// bias vector and contribute no bias parameter.
struct Mlp {
    std::vector<MatrixXd> weights;   // layer k: out_k x in_k
    std::vector<VectorXd> biases;    // out_k, or size 0 when the layer is bias-free
    bool activate_output = false;

    int in_dim() const { return static_cast<int>(weights.front().cols()); }
    int out_dim() const { return static_cast<int>(weights.back().rows()); }
    int num_layers() const { return static_cast<int>(weights.size()); }
};

struct MlpCache {
    MatrixXd input;
    std::vector<MatrixXd> pre;    // pre-activation per layer
    std::vector<MatrixXd> post;   // layer outputs (after activation where applied)
};

struct MlpGrads {
    std::vector<MatrixXd> weights;
    std::vector<VectorXd> biases;
};

/// Rows of `x` are independent inputs.
MatrixXd mlp_forward(const Mlp& mlp, const MatrixXd& x, MlpCache* cache = nullptr);
/// Returns d loss / d input; accumulates parameter gradients into `grads`.
MatrixXd mlp_backward(const Mlp& mlp, const MlpCache& cache, const MatrixXd& dout,
                      MlpGrads& grads);

MlpGrads mlp_zeros_like(const Mlp& mlp);

/// One equivariant message-passing layer:
///   m_ij   = phi_e(v_i, v_j, |x_i - x_j|^2, e_ij)
///   x_i'   = x_i + (1/|N(i)|) sum_j (x_i - x_j) phi_x(m_ij)
///   m_i    = sum_j m_ij
///   v_i'   = phi_h(v_i, m_i)
/// phi_h is bias-free so a zero-feature isolated node stays exactly zero
/// through the stack (keeps empty frames and padding nodes inert).
struct EgclParams {
    Mlp phi_e;
    Mlp phi_x;
    Mlp phi_h;
};

enum class Pooling : int { max = 0, mean = 1 };

struct EgnnConfig {
    int layers = 3;
    int hidden = 32;
    int node_in = 2;          // pressure, scaled cell area
    int edge_attr = 5;        // dist, static flag, geodesic, n.n, n.dir
    int readout_hidden = 32;
    Pooling pooling = Pooling::max;
};

/// Feature scale applied to cell_area (m^2) before it enters the network.
inline constexpr double kAreaFeatureScale = 1e4;

struct EgnnModel {
    EgnnConfig cfg;
    std::vector<EgclParams> layers;
    Mlp readout;              // concat(max, mean) over frames -> 4 logits
    uint64_t skin_hash = 0;

    /// Fan-in-scaled symmetric uniform init; phi_x output layers start at
    /// zero so the coordinate channel begins as the identity.
    static EgnnModel init(const EgnnConfig& cfg, uint64_t seed);
};

/// Flat views over every trainable tensor, in a stable order shared by the
/// optimizer, serializer, and gradient checks.
struct ParamView {
    double* data;
    std::ptrdiff_t size;
};
std::vector<ParamView> param_views(EgnnModel& model);

struct EgnnGrads {
    std::vector<MlpGrads> phi_e, phi_x, phi_h;
    MlpGrads readout;

    static EgnnGrads zeros_like(const EgnnModel& model);
    void add_scaled(const EgnnGrads& other, double scale);
    void scale(double s);
};
std::vector<ParamView> param_views(EgnnGrads& grads);

/// A graph window flattened for batched evaluation: nodes and directed
/// edges of all frames concatenated, per-frame offsets retained.
struct WindowBatch {
    int num_frames = 0;
    std::vector<int> node_offset;   // num_frames + 1
    MatrixXd v0;                    // total_nodes x node_in
    MatrixXd x0;                    // total_nodes x 3
    std::vector<int> recv, send;    // directed edges, global node indices
    MatrixXd edge_attr;             // E x edge_attr (receiver-side direction dot)
    VectorXd inv_degree;            // total_nodes, 0 for isolated nodes
    int total_nodes() const { return static_cast<int>(v0.rows()); }
    int total_edges() const { return static_cast<int>(recv.size()); }
};

/// `stride` subsamples the window keeping the newest frame: indices
/// end, end-stride, ... reordered oldest-first.
WindowBatch make_window_batch(const GraphWindow& window, int stride = 1);

struct WindowForwardCache {
    std::vector<MatrixXd> v_in, x_in;   // per layer inputs
    MatrixXd v_final, x_final;
    MatrixXd frame_embed;               // num_frames x hidden
    Eigen::MatrixXi pool_arg;           // argmax node per (frame, channel); -1 = zero floor
    std::vector<int> time_arg;          // argmax frame per channel
    VectorXd agg;                       // 2 hidden
    MlpCache readout_cache;
    VectorXd logits;
};

/// Full window evaluation. The cache is only needed for backpropagation.
VectorXd egnn_window_forward(const EgnnModel& model, const WindowBatch& batch,
                             WindowForwardCache* cache = nullptr);

/// Backpropagates d loss / d logits through readout, pooling, and the EGCL
/// stack (including the coordinate-update path), accumulating into grads.
void egnn_window_backward(const EgnnModel& model, const WindowBatch& batch,
                          const WindowForwardCache& cache, const VectorXd& dlogits,
                          EgnnGrads& grads);

/// Single-graph layer application (v, x) -> (v', x'); the building block
/// behind the window forward, exposed for direct use.
std::pair<MatrixXd, MatrixXd> egcl_forward(const EgclParams& params, const MatrixXd& v,
                                           const MatrixXd& x,
                                           const std::vector<GraphEdge>& edges);

struct ForwardResult {
    VectorXd logits;
    VectorXd probabilities;
    std::vector<MatrixXd> final_coords;   // per strided frame, when requested
};

/// Inference entry point: per-frame EGCL embedding with shared weights,
/// max||mean aggregation over frames, readout, softmax.
ForwardResult model_forward(const EgnnModel& model, const GraphWindow& window, int stride = 1,
                            bool collect_coords = false);

/// Embedding of one frame (pooled node features after the EGCL stack).
VectorXd embed_frame(const EgnnModel& model, const TactileGraph& graph);

/// Readout + softmax over cached frame embeddings (streaming path).
ForwardResult readout_from_embeddings(const EgnnModel& model,
                                      const std::vector<VectorXd>& frame_embeddings);

VectorXd softmax(const VectorXd& logits);

/// Mean cross-entropy over the batch plus l2 * sum of squared weights.
/// Gradients cover every parameter. Throws std::runtime_error when the
/// loss turns non-finite.
struct LossResult {
    double loss = 0.0;
    double accuracy = 0.0;
    EgnnGrads grads;
};
LossResult loss_and_gradients(const EgnnModel& model, const std::vector<const WindowBatch*>& batch,
                              const std::vector<int>& labels, double l2);

} // namespace taxelgraph

#endif
