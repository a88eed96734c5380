#include "taxelgraph/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "taxelgraph/rng.hpp"

namespace taxelgraph {

FlatSample flatten(const std::vector<PressureFrame>& frames, int label, int stride) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    FlatSample out;
    out.label = label;
    std::vector<int> picks;
    for (int f = 0; f < static_cast<int>(frames.size()); f += stride) picks.push_back(f);
    const int n = frames.empty() ? 0 : static_cast<int>(frames[0].pressure.size());
    out.vec.resize(static_cast<Eigen::Index>(picks.size()) * n);
    for (size_t i = 0; i < picks.size(); ++i) {
        out.vec.segment(static_cast<Eigen::Index>(i) * n, n) = frames[picks[i]].pressure;
    }
    return out;
}

int knn_classify(const std::vector<FlatSample>& train, const Eigen::VectorXf& query, int k_nn) {
    if (train.empty()) throw std::invalid_argument("knn needs a non-empty training set");
    if (k_nn < 1) throw std::invalid_argument("k_nn must be >= 1");

    std::vector<std::pair<double, int>> dist;
    dist.reserve(train.size());
    for (size_t i = 0; i < train.size(); ++i) {
        dist.emplace_back((train[i].vec - query).squaredNorm(), static_cast<int>(i));
    }
    const int take = std::min<int>(k_nn, static_cast<int>(train.size()));
    std::partial_sort(dist.begin(), dist.begin() + take, dist.end());

    int votes[kNumGestureClasses] = {0};
    for (int i = 0; i < take; ++i) votes[train[dist[i].second].label]++;
    int best = 0;
    for (int c = 1; c < kNumGestureClasses; ++c) {
        if (votes[c] > votes[best]) best = c;
    }
    return best;
}

namespace {

std::vector<ParamView> mlp_views(Mlp& mlp) {
    std::vector<ParamView> out;
    for (size_t k = 0; k < mlp.weights.size(); ++k) {
        out.push_back({mlp.weights[k].data(), mlp.weights[k].size()});
        if (mlp.biases[k].size() > 0) out.push_back({mlp.biases[k].data(), mlp.biases[k].size()});
    }
    return out;
}

std::vector<ParamView> mlp_views(MlpGrads& g) {
    std::vector<ParamView> out;
    for (size_t k = 0; k < g.weights.size(); ++k) {
        out.push_back({g.weights[k].data(), g.weights[k].size()});
        if (g.biases[k].size() > 0) out.push_back({g.biases[k].data(), g.biases[k].size()});
    }
    return out;
}

struct BatchLoss {
    double loss = 0.0;
    double accuracy = 0.0;
};

BatchLoss mlp_loss_step(Mlp& net, const MatrixXd& x, const std::vector<int>& labels, double l2,
                        MlpGrads* grads) {
    MlpCache cache;
    MatrixXd logits = mlp_forward(net, x, grads ? &cache : nullptr);
    const int b = static_cast<int>(x.rows());
    const double inv_b = 1.0 / b;

    BatchLoss out;
    MatrixXd dlogits(b, logits.cols());
    int correct = 0;
    for (int i = 0; i < b; ++i) {
        const VectorXd row = logits.row(i).transpose();
        const double m = row.maxCoeff();
        const double lse = m + std::log((row.array() - m).exp().sum());
        out.loss += (lse - row[labels[i]]) * inv_b;
        int pred = 0;
        row.maxCoeff(&pred);
        if (pred == labels[i]) ++correct;
        VectorXd p = softmax(row);
        p[labels[i]] -= 1.0;
        dlogits.row(i) = (p * inv_b).transpose();
    }
    out.accuracy = static_cast<double>(correct) / b;

    if (grads) {
        mlp_backward(net, cache, dlogits, *grads);
        if (l2 > 0.0) {
            for (size_t k = 0; k < net.weights.size(); ++k) {
                out.loss += l2 * net.weights[k].squaredNorm();
                grads->weights[k] += 2.0 * l2 * net.weights[k];
            }
        }
    }
    if (!std::isfinite(out.loss)) throw std::runtime_error("non-finite loss");
    return out;
}

} // namespace

MlpBaseline mlp_train(const std::vector<FlatSample>& samples, const MlpBaselineConfig& cfg) {
    if (samples.empty()) throw std::invalid_argument("empty training set");
    const int dim = static_cast<int>(samples[0].vec.size());

    Rng rng(cfg.seed);
    MlpBaseline model;
    {
        // Same fan-in uniform init family as the graph model.
        auto layer = [&rng](int in, int out) {
            MatrixXd w(out, in);
            const double bound = 1.0 / std::sqrt(static_cast<double>(in));
            for (int i = 0; i < out; ++i) {
                for (int j = 0; j < in; ++j) w(i, j) = rng.uniform(-bound, bound);
            }
            return w;
        };
        model.net.weights = {layer(dim, cfg.hidden1), layer(cfg.hidden1, cfg.hidden2),
                             layer(cfg.hidden2, kNumGestureClasses)};
        model.net.biases = {VectorXd::Zero(cfg.hidden1), VectorXd::Zero(cfg.hidden2),
                            VectorXd::Zero(kNumGestureClasses)};
        model.net.activate_output = false;
    }

    std::vector<int> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
        std::swap(order[i], order[rng.uniform_int(0, i)]);
    }
    const int n_val = static_cast<int>(std::lround(cfg.val_fraction * samples.size()));
    std::vector<int> val_idx(order.begin(), order.begin() + n_val);
    std::vector<int> train_idx(order.begin() + n_val, order.end());

    AdamState adam;
    auto params = mlp_views(model.net);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (int i = static_cast<int>(train_idx.size()) - 1; i > 0; --i) {
            std::swap(train_idx[i], train_idx[rng.uniform_int(0, i)]);
        }
        double epoch_loss = 0.0, epoch_correct = 0.0;
        int seen = 0;
        for (size_t b = 0; b < train_idx.size(); b += cfg.batch_size) {
            const int bs = std::min<int>(cfg.batch_size, static_cast<int>(train_idx.size() - b));
            MatrixXd x(bs, dim);
            std::vector<int> labels(bs);
            for (int j = 0; j < bs; ++j) {
                x.row(j) = samples[train_idx[b + j]].vec.cast<double>().transpose();
                labels[j] = samples[train_idx[b + j]].label;
            }
            MlpGrads grads = mlp_zeros_like(model.net);
            BatchLoss bl;
            try {
                bl = mlp_loss_step(model.net, x, labels, cfg.l2, &grads);
            } catch (const std::runtime_error&) {
                model.diverged = true;
                return model;
            }
            if (bl.loss > cfg.divergence_loss) {
                model.diverged = true;
                return model;
            }
            adam.step(params, mlp_views(grads), cfg.lr);
            epoch_loss += bl.loss * bs;
            epoch_correct += bl.accuracy * bs;
            seen += bs;
        }

        int val_correct = 0;
        for (int i : val_idx) {
            if (mlp_classify(model, samples[i].vec) == samples[i].label) ++val_correct;
        }
        EpochStats stats;
        stats.epoch = epoch;
        stats.loss = seen > 0 ? epoch_loss / seen : 0.0;
        stats.train_acc = seen > 0 ? epoch_correct / seen : 0.0;
        stats.val_acc = val_idx.empty() ? 0.0 : static_cast<double>(val_correct) / val_idx.size();
        model.history.push_back(stats);
    }
    return model;
}

int mlp_classify(const MlpBaseline& model, const Eigen::VectorXf& query) {
    MatrixXd x = query.cast<double>().transpose();
    MatrixXd logits = mlp_forward(model.net, x);
    int pred = 0;
    logits.row(0).maxCoeff(&pred);
    return pred;
}

double mlp_accuracy(const MlpBaseline& model, const std::vector<FlatSample>& samples) {
    if (samples.empty()) return 0.0;
    int correct = 0;
    for (const FlatSample& s : samples) {
        if (mlp_classify(model, s.vec) == s.label) ++correct;
    }
    return static_cast<double>(correct) / samples.size();
}

} // namespace taxelgraph
