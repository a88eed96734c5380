#include "taxelgraph/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "taxelgraph/parallel.hpp"
#include "taxelgraph/rng.hpp"

namespace taxelgraph {

void AdamState::step(std::vector<ParamView> params, std::vector<ParamView> grads, double lr) {
    std::ptrdiff_t total = 0;
    for (const ParamView& p : params) total += p.size;
    if (m.size() != total) {
        m = VectorXd::Zero(total);
        v = VectorXd::Zero(total);
        t = 0;
    }
    ++t;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));

    std::ptrdiff_t off = 0;
    for (size_t i = 0; i < params.size(); ++i) {
        Eigen::Map<VectorXd> p(params[i].data, params[i].size);
        Eigen::Map<const VectorXd> g(grads[i].data, grads[i].size);
        auto mi = m.segment(off, params[i].size);
        auto vi = v.segment(off, params[i].size);
        mi = beta1 * mi + (1.0 - beta1) * g;
        vi = beta2 * vi + (1.0 - beta2) * g.cwiseProduct(g);
        p -= lr * (mi / bc1).cwiseQuotient(((vi / bc2).cwiseSqrt().array() + eps).matrix());
        off += params[i].size;
    }
}

GraphWindow build_strided_window(const SkinConfig& skin, const StaticEdges& statics,
                                 const std::vector<PressureFrame>& frames, double theta_act,
                                 int k, int stride) {
    std::vector<int> indices;
    for (int i = static_cast<int>(frames.size()) - 1; i >= 0; i -= stride) indices.push_back(i);
    std::reverse(indices.begin(), indices.end());

    GraphWindow window;
    window.graphs.resize(indices.size());
    // The pose is fixed within a recording; frames at other poses (padding)
    // carry their own q, so compute per distinct q lazily.
    std::vector<TaxelPose> poses;
    JointState last_q;
    for (size_t i = 0; i < indices.size(); ++i) {
        const PressureFrame& f = frames[indices[i]];
        if (poses.empty() || last_q.size() != f.q.size() || last_q != f.q) {
            poses = taxel_world_poses(skin, f.q);
            last_q = f.q;
        }
        window.graphs[i] = build_graph(skin, statics, poses,
                                       {f.pressure.data(), static_cast<size_t>(f.pressure.size())},
                                       theta_act, k);
    }
    return window;
}

std::vector<int> predict_egnn(const EgnnModel& model, const SkinConfig& skin,
                              const StaticEdges& statics, const std::vector<TrainSample>& samples,
                              double theta_act, int k, int stride) {
    std::vector<int> preds(samples.size(), -1);
    parallel_for(static_cast<int>(samples.size()), [&](int i) {
        GraphWindow w = build_strided_window(skin, statics, samples[i].frames, theta_act, k, stride);
        ForwardResult r = model_forward(model, w, 1);
        int arg = 0;
        r.logits.maxCoeff(&arg);
        preds[i] = arg;
    });
    return preds;
}

double evaluate_egnn(const EgnnModel& model, const SkinConfig& skin, const StaticEdges& statics,
                     const std::vector<TrainSample>& samples, double theta_act, int k,
                     int stride) {
    if (samples.empty()) return 0.0;
    const auto preds = predict_egnn(model, skin, statics, samples, theta_act, k, stride);
    int correct = 0;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (preds[i] == samples[i].label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

TrainResult train_egnn(const SkinConfig& skin, const StaticEdges& statics, const EgnnConfig& cfg,
                       const std::vector<TrainSample>& samples, const TrainConfig& tc) {
    TrainResult result;
    result.model = EgnnModel::init(cfg, tc.seed);
    result.model.skin_hash = statics.skin_hash();

    // Seeded shuffle split.
    std::vector<int> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(tc.seed ^ 0x5bf03635d0d28571ull);
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
        std::swap(order[i], order[rng.uniform_int(0, i)]);
    }
    const int n_val = static_cast<int>(std::lround(tc.val_fraction * samples.size()));
    std::vector<int> val_idx(order.begin(), order.begin() + n_val);
    std::vector<int> train_idx(order.begin() + n_val, order.end());

    std::vector<TrainSample> val_samples;
    for (int i : val_idx) val_samples.push_back(samples[i]);

    AdamState adam;
    auto params = param_views(result.model);

    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
        for (int i = static_cast<int>(train_idx.size()) - 1; i > 0; --i) {
            std::swap(train_idx[i], train_idx[rng.uniform_int(0, i)]);
        }

        double epoch_loss = 0.0;
        double epoch_correct = 0.0;
        int seen = 0;

        for (size_t b = 0; b < train_idx.size(); b += tc.batch_size) {
            const int bs = std::min<int>(tc.batch_size, static_cast<int>(train_idx.size() - b));

            std::vector<WindowBatch> batches(bs);
            std::vector<int> labels(bs);
            parallel_for(bs, [&](int j) {
                const TrainSample& s = samples[train_idx[b + j]];
                GraphWindow w = build_strided_window(skin, statics, s.frames, tc.theta_act,
                                                     tc.k, tc.stride);
                batches[j] = make_window_batch(w, 1);
                labels[j] = s.label;
            });

            std::vector<const WindowBatch*> batch_ptrs(bs);
            for (int j = 0; j < bs; ++j) batch_ptrs[j] = &batches[j];

            LossResult lr;
            try {
                lr = loss_and_gradients(result.model, batch_ptrs, labels, tc.l2);
            } catch (const std::runtime_error&) {
                result.diverged = true;
                return result;
            }
            if (lr.loss > tc.divergence_loss) {
                result.diverged = true;
                return result;
            }

            adam.step(params, param_views(lr.grads), tc.lr);

            epoch_loss += lr.loss * bs;
            epoch_correct += lr.accuracy * bs;
            seen += bs;
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.loss = seen > 0 ? epoch_loss / seen : 0.0;
        stats.train_acc = seen > 0 ? epoch_correct / seen : 0.0;
        stats.val_acc = evaluate_egnn(result.model, skin, statics, val_samples, tc.theta_act,
                                      tc.k, tc.stride);
        result.history.push_back(stats);

        if (stats.val_acc >= tc.early_stop_val_acc) break;
    }
    return result;
}

} // namespace taxelgraph
