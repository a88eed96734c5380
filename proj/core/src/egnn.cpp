#include "taxelgraph/egnn.hpp"

#include <cmath>
#include <stdexcept>

#include "taxelgraph/rng.hpp"

namespace taxelgraph {

namespace {

MatrixXd apply_silu(const MatrixXd& z) {
    return z.unaryExpr([](double v) { return silu(v); });
}

Mlp make_mlp(const std::vector<int>& dims, bool bias, bool activate_output, Rng& rng,
             bool zero_last = false, bool bias_on_last = true) {
    Mlp mlp;
    mlp.activate_output = activate_output;
    for (size_t k = 0; k + 1 < dims.size(); ++k) {
        const int in = dims[k], out = dims[k + 1];
        MatrixXd w(out, in);
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        for (int i = 0; i < out; ++i) {
            for (int j = 0; j < in; ++j) w(i, j) = rng.uniform(-bound, bound);
        }
        const bool last = k + 2 == dims.size();
        if (zero_last && last) w.setZero();
        mlp.weights.push_back(std::move(w));
        mlp.biases.emplace_back((bias && (!last || bias_on_last)) ? VectorXd::Zero(out).eval()
                                                                  : VectorXd());
    }
    return mlp;
}

} // namespace

MatrixXd mlp_forward(const Mlp& mlp, const MatrixXd& x, MlpCache* cache) {
    if (x.cols() != mlp.in_dim()) {
        throw std::invalid_argument("mlp input has " + std::to_string(x.cols()) +
                                    " features, expected " + std::to_string(mlp.in_dim()));
    }
    if (cache) {
        cache->input = x;
        cache->pre.clear();
        cache->post.clear();
    }
    MatrixXd a = x;
    for (int k = 0; k < mlp.num_layers(); ++k) {
        MatrixXd z = a * mlp.weights[k].transpose();
        if (mlp.biases[k].size() > 0) z.rowwise() += mlp.biases[k].transpose();
        const bool act = k + 1 < mlp.num_layers() || mlp.activate_output;
        MatrixXd out = act ? apply_silu(z) : z;
        if (cache) {
            cache->pre.push_back(std::move(z));
            cache->post.push_back(out);
        }
        a = std::move(out);
    }
    return a;
}

MatrixXd mlp_backward(const Mlp& mlp, const MlpCache& cache, const MatrixXd& dout,
                      MlpGrads& grads) {
    MatrixXd grad = dout;
    for (int k = mlp.num_layers() - 1; k >= 0; --k) {
        const bool act = k + 1 < mlp.num_layers() || mlp.activate_output;
        MatrixXd dz;
        if (act) {
            dz = grad.cwiseProduct(cache.pre[k].unaryExpr([](double v) { return silu_grad(v); }));
        } else {
            dz = std::move(grad);
        }
        const MatrixXd& a_prev = k > 0 ? cache.post[k - 1] : cache.input;
        grads.weights[k].noalias() += dz.transpose() * a_prev;
        if (mlp.biases[k].size() > 0) grads.biases[k] += dz.colwise().sum().transpose();
        grad = dz * mlp.weights[k];
    }
    return grad;
}

MlpGrads mlp_zeros_like(const Mlp& mlp) {
    MlpGrads g;
    for (int k = 0; k < mlp.num_layers(); ++k) {
        g.weights.push_back(MatrixXd::Zero(mlp.weights[k].rows(), mlp.weights[k].cols()));
        g.biases.emplace_back(mlp.biases[k].size() > 0 ? VectorXd::Zero(mlp.biases[k].size()).eval()
                                                       : VectorXd());
    }
    return g;
}

EgnnModel EgnnModel::init(const EgnnConfig& cfg, uint64_t seed) {
    if (cfg.layers < 1 || cfg.hidden < 1) {
        throw std::invalid_argument("model needs at least one layer and one hidden unit");
    }
    Rng rng(seed);
    EgnnModel model;
    model.cfg = cfg;
    for (int l = 0; l < cfg.layers; ++l) {
        const int dv = l == 0 ? cfg.node_in : cfg.hidden;
        EgclParams layer;
        layer.phi_e =
            make_mlp({2 * dv + 1 + cfg.edge_attr, cfg.hidden, cfg.hidden}, true, true, rng);
        layer.phi_x = make_mlp({cfg.hidden, cfg.hidden, 1}, true, false, rng,
                               /*zero_last=*/true, /*bias_on_last=*/false);
        layer.phi_h = make_mlp({dv + cfg.hidden, cfg.hidden, cfg.hidden}, false, false, rng);
        model.layers.push_back(std::move(layer));
    }
    model.readout = make_mlp({2 * cfg.hidden, cfg.readout_hidden, kNumGestureClasses}, true,
                             false, rng);
    return model;
}

namespace {

void collect_mlp_views(Mlp& mlp, std::vector<ParamView>& out) {
    for (size_t k = 0; k < mlp.weights.size(); ++k) {
        out.push_back({mlp.weights[k].data(), mlp.weights[k].size()});
        if (mlp.biases[k].size() > 0) out.push_back({mlp.biases[k].data(), mlp.biases[k].size()});
    }
}

void collect_mlp_views(MlpGrads& g, std::vector<ParamView>& out) {
    for (size_t k = 0; k < g.weights.size(); ++k) {
        out.push_back({g.weights[k].data(), g.weights[k].size()});
        if (g.biases[k].size() > 0) out.push_back({g.biases[k].data(), g.biases[k].size()});
    }
}

} // namespace

std::vector<ParamView> param_views(EgnnModel& model) {
    std::vector<ParamView> out;
    for (EgclParams& l : model.layers) {
        collect_mlp_views(l.phi_e, out);
        collect_mlp_views(l.phi_x, out);
        collect_mlp_views(l.phi_h, out);
    }
    collect_mlp_views(model.readout, out);
    return out;
}

std::vector<ParamView> param_views(EgnnGrads& grads) {
    std::vector<ParamView> out;
    for (size_t l = 0; l < grads.phi_e.size(); ++l) {
        collect_mlp_views(grads.phi_e[l], out);
        collect_mlp_views(grads.phi_x[l], out);
        collect_mlp_views(grads.phi_h[l], out);
    }
    collect_mlp_views(grads.readout, out);
    return out;
}

EgnnGrads EgnnGrads::zeros_like(const EgnnModel& model) {
    EgnnGrads g;
    for (const EgclParams& l : model.layers) {
        g.phi_e.push_back(mlp_zeros_like(l.phi_e));
        g.phi_x.push_back(mlp_zeros_like(l.phi_x));
        g.phi_h.push_back(mlp_zeros_like(l.phi_h));
    }
    g.readout = mlp_zeros_like(model.readout);
    return g;
}

void EgnnGrads::add_scaled(const EgnnGrads& other, double s) {
    auto self = param_views(*this);
    auto that = param_views(const_cast<EgnnGrads&>(other));
    for (size_t i = 0; i < self.size(); ++i) {
        Eigen::Map<VectorXd>(self[i].data, self[i].size) +=
            s * Eigen::Map<const VectorXd>(that[i].data, that[i].size);
    }
}

void EgnnGrads::scale(double s) {
    for (ParamView v : param_views(*this)) {
        Eigen::Map<VectorXd>(v.data, v.size) *= s;
    }
}

WindowBatch make_window_batch(const GraphWindow& window, int stride) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    std::vector<int> indices;
    for (int i = static_cast<int>(window.graphs.size()) - 1; i >= 0; i -= stride) {
        indices.push_back(i);
    }
    std::reverse(indices.begin(), indices.end());

    WindowBatch batch;
    batch.num_frames = static_cast<int>(indices.size());
    batch.node_offset.resize(batch.num_frames + 1, 0);

    int total_nodes = 0, total_edges = 0;
    for (int f = 0; f < batch.num_frames; ++f) {
        const TactileGraph& g = window.graphs[indices[f]];
        batch.node_offset[f] = total_nodes;
        total_nodes += g.num_nodes();
        total_edges += 2 * static_cast<int>(g.edges.size());
    }
    batch.node_offset[batch.num_frames] = total_nodes;

    batch.v0.resize(total_nodes, 2);
    batch.x0.resize(total_nodes, 3);
    batch.recv.reserve(total_edges);
    batch.send.reserve(total_edges);
    batch.edge_attr.resize(total_edges, 5);
    batch.inv_degree = VectorXd::Zero(total_nodes);

    int e_out = 0;
    for (int f = 0; f < batch.num_frames; ++f) {
        const TactileGraph& g = window.graphs[indices[f]];
        const int base = batch.node_offset[f];
        for (int i = 0; i < g.num_nodes(); ++i) {
            batch.v0(base + i, 0) = g.pressure[i];
            batch.v0(base + i, 1) = g.cell_area[i] * kAreaFeatureScale;
            batch.x0.row(base + i) = g.positions[i].transpose();
        }
        for (const GraphEdge& ge : g.edges) {
            const double flag = ge.is_static ? 1.0 : 0.0;
            batch.recv.push_back(base + ge.a);
            batch.send.push_back(base + ge.b);
            batch.edge_attr.row(e_out++) << ge.distance, flag, ge.geodesic, ge.normal_dot,
                ge.dir_dot_a;
            batch.recv.push_back(base + ge.b);
            batch.send.push_back(base + ge.a);
            batch.edge_attr.row(e_out++) << ge.distance, flag, ge.geodesic, ge.normal_dot,
                ge.dir_dot_b;
        }
    }
    for (int r : batch.recv) batch.inv_degree[r] += 1.0;
    for (int i = 0; i < total_nodes; ++i) {
        batch.inv_degree[i] = batch.inv_degree[i] > 0.0 ? 1.0 / batch.inv_degree[i] : 0.0;
    }
    return batch;
}

namespace {

struct EdgeWork {
    MatrixXd diff;      // E x 3, x_recv - x_send
    MatrixXd ein;       // E x (2 dv + 1 + attr)
    MlpCache cache_e, cache_x, cache_h;
    MatrixXd messages;  // E x h
    MatrixXd gate;      // E x 1
};

// One EGCL layer on the flattened batch. `work` is filled when caches are
// requested (backward recompute).
void egcl_layer_forward(const EgclParams& params, const WindowBatch& batch, const MatrixXd& v,
                        const MatrixXd& x, MatrixXd& v_out, MatrixXd& x_out, EdgeWork* work,
                        EdgeWork* scratch) {
    const int n = static_cast<int>(v.rows());
    const int e = batch.total_edges();
    const int dv = static_cast<int>(v.cols());
    const int h = params.phi_e.out_dim();

    EdgeWork local;
    EdgeWork& w = work ? *work : (scratch ? *scratch : local);

    w.diff.resize(e, 3);
    w.ein.resize(e, 2 * dv + 1 + batch.edge_attr.cols());
    for (int i = 0; i < e; ++i) {
        const int r = batch.recv[i], s = batch.send[i];
        w.diff.row(i) = x.row(r) - x.row(s);
        w.ein.block(i, 0, 1, dv) = v.row(r);
        w.ein.block(i, dv, 1, dv) = v.row(s);
        w.ein(i, 2 * dv) = w.diff.row(i).squaredNorm();
        w.ein.block(i, 2 * dv + 1, 1, batch.edge_attr.cols()) = batch.edge_attr.row(i);
    }

    w.messages = mlp_forward(params.phi_e, w.ein, work ? &w.cache_e : nullptr);
    w.gate = mlp_forward(params.phi_x, w.messages, work ? &w.cache_x : nullptr);

    MatrixXd msum = MatrixXd::Zero(n, h);
    x_out = x;
    for (int i = 0; i < e; ++i) {
        const int r = batch.recv[i];
        msum.row(r) += w.messages.row(i);
        x_out.row(r) += batch.inv_degree[r] * w.gate(i, 0) * w.diff.row(i);
    }

    MatrixXd hin(n, dv + h);
    hin << v, msum;
    v_out = mlp_forward(params.phi_h, hin, work ? &w.cache_h : nullptr);
}

void run_stack(const EgnnModel& model, const WindowBatch& batch, MatrixXd& v, MatrixXd& x,
               WindowForwardCache* cache) {
    v = batch.v0;
    x = batch.x0;
    EdgeWork scratch;
    for (const EgclParams& layer : model.layers) {
        if (cache) {
            cache->v_in.push_back(v);
            cache->x_in.push_back(x);
        }
        MatrixXd v_next, x_next;
        egcl_layer_forward(layer, batch, v, x, v_next, x_next, nullptr, &scratch);
        v = std::move(v_next);
        x = std::move(x_next);
    }
}

// Pooled embedding per frame. With max pooling a zero floor participates,
// so frames dominated by negative features clamp at zero exactly like an
// empty frame (pool_arg -1 marks the floor).
MatrixXd pool_frames(const EgnnModel& model, const WindowBatch& batch, const MatrixXd& v_final,
                     Eigen::MatrixXi* pool_arg) {
    const int h = model.cfg.hidden;
    MatrixXd embed = MatrixXd::Zero(batch.num_frames, h);
    if (pool_arg) *pool_arg = Eigen::MatrixXi::Constant(batch.num_frames, h, -1);

    for (int f = 0; f < batch.num_frames; ++f) {
        const int lo = batch.node_offset[f], hi = batch.node_offset[f + 1];
        if (hi == lo) continue;
        if (model.cfg.pooling == Pooling::max) {
            for (int c = 0; c < h; ++c) {
                double best = 0.0;
                int arg = -1;
                for (int i = lo; i < hi; ++i) {
                    if (v_final(i, c) > best) {
                        best = v_final(i, c);
                        arg = i;
                    }
                }
                embed(f, c) = best;
                if (pool_arg) (*pool_arg)(f, c) = arg;
            }
        } else {
            embed.row(f) = v_final.middleRows(lo, hi - lo).colwise().mean();
        }
    }
    return embed;
}

VectorXd aggregate_time(const MatrixXd& frame_embed, std::vector<int>* time_arg) {
    const int f = static_cast<int>(frame_embed.rows());
    const int h = static_cast<int>(frame_embed.cols());
    VectorXd agg = VectorXd::Zero(2 * h);
    if (time_arg) time_arg->assign(h, 0);
    for (int c = 0; c < h; ++c) {
        double best = frame_embed(0, c);
        int arg = 0;
        for (int i = 1; i < f; ++i) {
            if (frame_embed(i, c) > best) {
                best = frame_embed(i, c);
                arg = i;
            }
        }
        agg[c] = best;
        if (time_arg) (*time_arg)[c] = arg;
    }
    agg.segment(h, h) = frame_embed.colwise().mean().transpose();
    return agg;
}

} // namespace

VectorXd egnn_window_forward(const EgnnModel& model, const WindowBatch& batch,
                             WindowForwardCache* cache) {
    if (batch.num_frames == 0) throw std::invalid_argument("window is empty");

    MatrixXd v, x;
    if (cache) {
        cache->v_in.clear();
        cache->x_in.clear();
    }
    run_stack(model, batch, v, x, cache);

    Eigen::MatrixXi pool_arg;
    MatrixXd frame_embed = pool_frames(model, batch, v, cache ? &pool_arg : nullptr);

    std::vector<int> time_arg;
    VectorXd agg = aggregate_time(frame_embed, cache ? &time_arg : nullptr);

    MlpCache readout_cache;
    MatrixXd logits_row =
        mlp_forward(model.readout, agg.transpose(), cache ? &readout_cache : nullptr);
    VectorXd logits = logits_row.row(0).transpose();

    if (cache) {
        cache->v_final = std::move(v);
        cache->x_final = std::move(x);
        cache->frame_embed = std::move(frame_embed);
        cache->pool_arg = std::move(pool_arg);
        cache->time_arg = std::move(time_arg);
        cache->agg = std::move(agg);
        cache->readout_cache = std::move(readout_cache);
        cache->logits = logits;
    }
    return logits;
}

void egnn_window_backward(const EgnnModel& model, const WindowBatch& batch,
                          const WindowForwardCache& cache, const VectorXd& dlogits,
                          EgnnGrads& grads) {
    const int h = model.cfg.hidden;
    const int frames = batch.num_frames;

    // Readout.
    MatrixXd dagg_row = mlp_backward(model.readout, cache.readout_cache, dlogits.transpose(),
                                     grads.readout);
    VectorXd dagg = dagg_row.row(0).transpose();

    // Temporal aggregation: max routes to the argmax frame, mean spreads.
    MatrixXd dembed = MatrixXd::Zero(frames, h);
    for (int c = 0; c < h; ++c) {
        dembed(cache.time_arg[c], c) += dagg[c];
        dembed.col(c).array() += dagg[h + c] / frames;
    }

    // Node pooling.
    MatrixXd dv = MatrixXd::Zero(cache.v_final.rows(), h);
    for (int f = 0; f < frames; ++f) {
        const int lo = batch.node_offset[f], hi = batch.node_offset[f + 1];
        if (hi == lo) continue;
        if (model.cfg.pooling == Pooling::max) {
            for (int c = 0; c < h; ++c) {
                const int arg = cache.pool_arg(f, c);
                if (arg >= 0) dv(arg, c) += dembed(f, c);
            }
        } else {
            const double inv = 1.0 / (hi - lo);
            for (int i = lo; i < hi; ++i) dv.row(i) += inv * dembed.row(f);
        }
    }

    // EGCL stack, newest layer first, recomputing forward internals.
    MatrixXd dx = MatrixXd::Zero(cache.x_final.rows(), 3);
    const int e = batch.total_edges();
    for (int l = model.cfg.layers - 1; l >= 0; --l) {
        const EgclParams& params = model.layers[l];
        const MatrixXd& v_in = cache.v_in[l];
        const MatrixXd& x_in = cache.x_in[l];
        const int dv_in = static_cast<int>(v_in.cols());

        EdgeWork work;
        MatrixXd v_out_dummy, x_out_dummy;
        egcl_layer_forward(params, batch, v_in, x_in, v_out_dummy, x_out_dummy, &work, nullptr);

        // v' = phi_h([v, msum])
        MatrixXd dhin = mlp_backward(params.phi_h, work.cache_h, dv, grads.phi_h[l]);
        MatrixXd dv_next = dhin.leftCols(dv_in);
        MatrixXd dmsum = dhin.rightCols(params.phi_e.out_dim());

        // Coordinate update path.
        MatrixXd dgate(e, 1);
        MatrixXd dx_next = dx;   // identity path x' = x + ...
        for (int i = 0; i < e; ++i) {
            const int r = batch.recv[i], s = batch.send[i];
            const double c = batch.inv_degree[r];
            dgate(i, 0) = c * dx.row(r).dot(work.diff.row(i));
            const auto contrib = (c * work.gate(i, 0)) * dx.row(r);
            dx_next.row(r) += contrib;
            dx_next.row(s) -= contrib;
        }

        // Messages receive gradient from phi_x and from the node sum.
        MatrixXd dmessages = mlp_backward(params.phi_x, work.cache_x, dgate, grads.phi_x[l]);
        for (int i = 0; i < e; ++i) dmessages.row(i) += dmsum.row(batch.recv[i]);

        MatrixXd dein = mlp_backward(params.phi_e, work.cache_e, dmessages, grads.phi_e[l]);
        for (int i = 0; i < e; ++i) {
            const int r = batch.recv[i], s = batch.send[i];
            dv_next.row(r) += dein.block(i, 0, 1, dv_in);
            dv_next.row(s) += dein.block(i, dv_in, 1, dv_in);
            const double dsq = dein(i, 2 * dv_in);
            dx_next.row(r) += 2.0 * dsq * work.diff.row(i);
            dx_next.row(s) -= 2.0 * dsq * work.diff.row(i);
        }

        dv = std::move(dv_next);
        dx = std::move(dx_next);
    }
}

std::pair<MatrixXd, MatrixXd> egcl_forward(const EgclParams& params, const MatrixXd& v,
                                           const MatrixXd& x,
                                           const std::vector<GraphEdge>& edges) {
    GraphWindow window;
    TactileGraph g;
    g.node_ids.resize(v.rows());
    g.pressure.assign(v.rows(), 0.0);
    g.cell_area.assign(v.rows(), 0.0);
    g.positions.assign(v.rows(), Vec3::Zero());
    g.normals.assign(v.rows(), Vec3::UnitZ());
    g.edges = edges;
    window.graphs.push_back(std::move(g));
    WindowBatch batch = make_window_batch(window, 1);
    batch.v0 = v;
    batch.x0 = x;

    MatrixXd v_out, x_out;
    EdgeWork scratch;
    egcl_layer_forward(params, batch, v, x, v_out, x_out, nullptr, &scratch);
    return {std::move(v_out), std::move(x_out)};
}

VectorXd softmax(const VectorXd& logits) {
    const double m = logits.maxCoeff();
    VectorXd e = (logits.array() - m).exp();
    return e / e.sum();
}

ForwardResult model_forward(const EgnnModel& model, const GraphWindow& window, int stride,
                            bool collect_coords) {
    WindowBatch batch = make_window_batch(window, stride);
    ForwardResult result;
    if (collect_coords) {
        WindowForwardCache cache;
        result.logits = egnn_window_forward(model, batch, &cache);
        for (int f = 0; f < batch.num_frames; ++f) {
            const int lo = batch.node_offset[f], hi = batch.node_offset[f + 1];
            result.final_coords.push_back(cache.x_final.middleRows(lo, hi - lo));
        }
    } else {
        result.logits = egnn_window_forward(model, batch);
    }
    result.probabilities = softmax(result.logits);
    return result;
}

VectorXd embed_frame(const EgnnModel& model, const TactileGraph& graph) {
    GraphWindow window;
    window.graphs.push_back(graph);
    WindowBatch batch = make_window_batch(window, 1);
    MatrixXd v, x;
    run_stack(model, batch, v, x, nullptr);
    MatrixXd embed = pool_frames(model, batch, v, nullptr);
    return embed.row(0).transpose();
}

ForwardResult readout_from_embeddings(const EgnnModel& model,
                                      const std::vector<VectorXd>& frame_embeddings) {
    if (frame_embeddings.empty()) throw std::invalid_argument("no frame embeddings");
    MatrixXd embed(frame_embeddings.size(), model.cfg.hidden);
    for (size_t i = 0; i < frame_embeddings.size(); ++i) {
        embed.row(i) = frame_embeddings[i].transpose();
    }
    VectorXd agg = aggregate_time(embed, nullptr);
    ForwardResult result;
    result.logits = mlp_forward(model.readout, agg.transpose()).row(0).transpose();
    result.probabilities = softmax(result.logits);
    return result;
}

LossResult loss_and_gradients(const EgnnModel& model, const std::vector<const WindowBatch*>& batch,
                              const std::vector<int>& labels, double l2) {
    if (batch.empty() || batch.size() != labels.size()) {
        throw std::invalid_argument("batch and labels must be non-empty and aligned");
    }
    LossResult result;
    result.grads = EgnnGrads::zeros_like(model);
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    int correct = 0;

    for (size_t i = 0; i < batch.size(); ++i) {
        const int label = labels[i];
        if (label < 0 || label >= kNumGestureClasses) {
            throw std::invalid_argument("label out of range");
        }
        WindowForwardCache cache;
        VectorXd logits = egnn_window_forward(model, *batch[i], &cache);
        VectorXd probs = softmax(logits);

        // Stable cross-entropy: -log softmax at the label.
        const double m = logits.maxCoeff();
        const double lse = m + std::log((logits.array() - m).exp().sum());
        result.loss += (lse - logits[label]) * inv_b;

        int pred = 0;
        logits.maxCoeff(&pred);
        if (pred == label) ++correct;

        VectorXd dlogits = probs * inv_b;
        dlogits[label] -= inv_b;
        egnn_window_backward(model, *batch[i], cache, dlogits, result.grads);
    }

    // L2 penalty on weights only.
    if (l2 > 0.0) {
        EgnnGrads& g = result.grads;
        auto add_l2 = [&](const Mlp& mlp, MlpGrads& mg) {
            for (size_t k = 0; k < mlp.weights.size(); ++k) {
                result.loss += l2 * mlp.weights[k].squaredNorm();
                mg.weights[k] += 2.0 * l2 * mlp.weights[k];
            }
        };
        for (int l = 0; l < model.cfg.layers; ++l) {
            add_l2(model.layers[l].phi_e, g.phi_e[l]);
            add_l2(model.layers[l].phi_x, g.phi_x[l]);
            add_l2(model.layers[l].phi_h, g.phi_h[l]);
        }
        add_l2(model.readout, g.readout);
    }

    if (!std::isfinite(result.loss)) {
        throw std::runtime_error("non-finite loss; training step aborted");
    }
    result.accuracy = static_cast<double>(correct) / static_cast<double>(batch.size());
    return result;
}

} // namespace taxelgraph
