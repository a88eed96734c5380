#include "taxelgraph/bench.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <fstream>
#include <thread>

#include "taxelgraph/rng.hpp"

namespace taxelgraph {

namespace {

double percentile(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t idx = static_cast<size_t>(p * (v.size() - 1));
    return v[idx];
}

StageStats stats_of(const std::vector<double>& ms) {
    StageStats s;
    if (ms.empty()) return s;
    double sum = 0.0;
    for (double v : ms) sum += v;
    s.mean_ms = sum / ms.size();
    s.p50_ms = percentile(ms, 0.50);
    s.p99_ms = percentile(ms, 0.99);
    return s;
}

} // namespace

std::string machine_descriptor() {
    std::string cpu = "unknown cpu";
    std::ifstream in("/proc/cpuinfo");
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto pos = line.find(':');
            if (pos != std::string::npos) cpu = line.substr(pos + 2);
            break;
        }
    }
    return cpu + ", " + std::to_string(std::thread::hardware_concurrency()) + " hw threads";
}

BenchReport run_recognition_bench(const SkinConfig& skin, const StaticEdges& statics,
                                  const EgnnModel& model, const LoadProfile& load,
                                  int iterations, const RecognizerConfig& cfg) {
    using clock = std::chrono::steady_clock;

    const int n = skin.num_taxels();
    JointState q = JointState::Zero(skin.chain.num_links());
    const auto poses = taxel_world_poses(skin, q);

    const int target_active = std::max(1, static_cast<int>(load.active_fraction * n));
    const int blobs = std::max(1, load.blobs);
    const int per_blob = std::max(1, target_active / blobs);

    Rng rng(load.seed);
    Eigen::VectorXf pressure(n);
    std::vector<std::pair<double, int>> by_dist(n);

    auto make_frame = [&]() {
        pressure.setZero();
        for (int b = 0; b < blobs; ++b) {
            const int anchor = static_cast<int>(rng.uniform_int(0, n - 1));
            for (int i = 0; i < n; ++i) {
                by_dist[i] = {(poses[i].position - poses[anchor].position).squaredNorm(), i};
            }
            std::nth_element(by_dist.begin(), by_dist.begin() + per_blob - 1, by_dist.end());
            const double amp = rng.uniform(0.3, 1.0);
            const double inv = 1.0 / (2.0 * load.blob_sigma * load.blob_sigma);
            for (int j = 0; j < per_blob; ++j) {
                const auto [d2, id] = by_dist[j];
                pressure[id] = std::max<float>(
                    pressure[id], static_cast<float>(amp * std::exp(-d2 * inv)) + 0.06f);
            }
        }
    };

    std::deque<VectorXd> embeddings;
    auto readout = [&]() {
        std::vector<VectorXd> strided;
        for (int i = 0; i < cfg.window; i += cfg.stride) {
            const long idx = static_cast<long>(embeddings.size()) - 1 - i;
            strided.push_back(idx >= 0 ? embeddings[idx] : VectorXd::Zero(model.cfg.hidden));
        }
        std::reverse(strided.begin(), strided.end());
        return readout_from_embeddings(model, strided);
    };

    const int warmup = std::min(20, iterations / 10 + 1);
    std::vector<double> t_build, t_forward, t_total;
    t_build.reserve(iterations);

    for (int it = 0; it < warmup + iterations; ++it) {
        make_frame();

        const auto t0 = clock::now();
        TactileGraph graph = build_graph(skin, statics, poses,
                                         {pressure.data(), static_cast<size_t>(n)},
                                         cfg.theta_act, cfg.k);
        const auto t1 = clock::now();
        embeddings.push_back(embed_frame(model, graph));
        if (embeddings.size() > static_cast<size_t>(cfg.window)) embeddings.pop_front();
        ForwardResult r = readout();
        (void)r;
        const auto t2 = clock::now();

        if (it >= warmup) {
            const double build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            const double fwd_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
            t_build.push_back(build_ms);
            t_forward.push_back(fwd_ms);
            t_total.push_back(build_ms + fwd_ms);
        }
    }

    BenchReport report;
    report.graph_build = stats_of(t_build);
    report.forward = stats_of(t_forward);
    report.total = stats_of(t_total);
    report.iterations = iterations;
    report.active_fraction = load.active_fraction;
    report.machine = machine_descriptor();
    return report;
}

} // namespace taxelgraph
