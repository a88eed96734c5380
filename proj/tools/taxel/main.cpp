// taxel: command-line surface for the tactile gesture recognition pipeline.
//
// Subcommands: skin validate/generate, dataset synth/label, train, eval,
// ablate, bench, demo, graph dump. Metrics are CSV on stable schemas; all
// subcommands exit nonzero on validation failure.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "taxelgraph/actions.hpp"
#include "taxelgraph/baselines.hpp"
#include "taxelgraph/bench.hpp"
#include "taxelgraph/builders.hpp"
#include "taxelgraph/config_io.hpp"
#include "taxelgraph/dataset_io.hpp"
#include "taxelgraph/graph.hpp"
#include "taxelgraph/model_io.hpp"
#include "taxelgraph/parallel.hpp"
#include "taxelgraph/predict.hpp"
#include "taxelgraph/segmentation.hpp"
#include "taxelgraph/synth.hpp"
#include "taxelgraph/train.hpp"
#include "taxelgraph/wire.hpp"

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace taxelgraph;

namespace {

std::array<int, 4> parse_counts(const std::string& s) {
    std::array<int, 4> counts{};
    if (std::sscanf(s.c_str(), "%d,%d,%d,%d", &counts[0], &counts[1], &counts[2], &counts[3]) !=
        4) {
        throw CLI::ValidationError("--counts expects poke,double_pat,grab,stroke");
    }
    return counts;
}

SkinConfig load_validated_skin(const std::string& path) {
    SkinConfig skin = load_skin_config(path);
    const auto errors = validate_skin(skin);
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "skin config error: " << e << "\n";
        throw std::runtime_error(path + ": invalid skin config");
    }
    return skin;
}

struct LoadedDataset {
    SkinConfig skin;
    DatasetManifest manifest;
    std::vector<TrainSample> samples;
};

// Reads a labeled dataset directory (manifest + recordings + samples.idx)
// into dense training windows.
LoadedDataset load_labeled_dataset(const std::string& dir, int window) {
    LoadedDataset ds;
    ds.skin = load_validated_skin(dir + "/skin.json");
    ds.manifest = read_manifest(dir);
    const auto index = read_sample_index(dir);

    int last_rec = -1;
    Recording rec;
    for (const SampleIndexEntry& e : index) {
        if (e.recording != last_rec) {
            rec = read_recording(dir + "/" + ds.manifest.recordings.at(e.recording).file);
            last_rec = e.recording;
        }
        TrainSample s;
        s.frames = materialize_window(rec, e.window_end - window + 1, e.window_end);
        s.label = e.class_id;
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

void write_metrics_csv(std::ostream& out, const std::vector<EpochStats>& history) {
    out << "epoch,train_acc,val_acc,loss\n";
    char line[128];
    for (const EpochStats& s : history) {
        std::snprintf(line, sizeof(line), "%d,%.6f,%.6f,%.6f\n", s.epoch, s.train_acc, s.val_acc,
                      s.loss);
        out << line;
    }
}

int cmd_skin_validate(const std::string& path) {
    SkinConfig skin = load_skin_config(path);
    const auto errors = validate_skin(skin);
    for (const auto& e : errors) std::cout << e << "\n";
    if (errors.empty()) {
        std::cout << "ok: " << skin.num_taxels() << " taxels, " << skin.patches.size()
                  << " patches, " << skin.chain.num_links() << " joints, hash "
                  << std::hex << skin_config_hash(skin) << std::dec << "\n";
        return 0;
    }
    std::cout << errors.size() << " violation(s)\n";
    return 1;
}

int cmd_skin_generate(const std::string& out_path, const std::string& rig) {
    SkinConfig skin;
    if (rig == "ur5") {
        skin = make_ur5_like_skin();
    } else if (rig == "fold") {
        skin = make_fold_rig_skin();
    } else {
        std::cerr << "unknown rig '" << rig << "' (expected ur5 or fold)\n";
        return 1;
    }
    save_skin_config(skin, out_path);
    std::cout << "wrote " << out_path << " (" << skin.num_taxels() << " taxels)\n";
    return 0;
}

int cmd_dataset_synth(const std::string& out_dir, const std::string& config_path,
                      const std::string& counts_str, uint64_t seed, int poses, double fs,
                      double noise, double theta_label, double joint_range) {
    SkinConfig skin = load_validated_skin(config_path);
    fs::create_directories(out_dir);

    DatasetSpec spec;
    spec.counts = parse_counts(counts_str);
    spec.num_poses = poses;
    spec.joint_ranges = {{-joint_range, joint_range}};
    spec.synth.fs = fs;
    spec.synth.noise_sigma = noise;
    spec.synth.theta_label = theta_label;

    DatasetManifest manifest;
    manifest.skin_hash = skin_config_hash(skin);
    manifest.seed = seed;
    manifest.fs = fs;
    manifest.n_taxels = skin.num_taxels();
    manifest.counts = spec.counts;

    int total = 0;
    for (int c : spec.counts) total += c;
    manifest.recordings.resize(total);

    const auto pool = sample_pose_pool(skin, spec, seed);
    std::vector<std::string> errors(total);
    parallel_for(total, [&](int i) {
        try {
            DatasetRecording rec = synthesize_recording_at(skin, spec, seed, i, pool);
            const std::string file = recording_filename(i);
            write_recording(out_dir + "/" + file, rec.recording);
            manifest.recordings[i] = {file, to_string(rec.cls), rec.pose_index, ""};
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    int failed = 0;
    for (int i = 0; i < total; ++i) {
        if (!errors[i].empty()) {
            manifest.recordings[i].error = errors[i];
            std::cerr << "recording " << i << " failed: " << errors[i] << "\n";
            ++failed;
        }
    }
    write_manifest(out_dir, manifest);
    save_skin_config(skin, out_dir + "/skin.json");
    std::cout << "wrote " << (total - failed) << "/" << total << " recordings to " << out_dir
              << "\n";
    return 0;
}

int cmd_dataset_label(const std::string& dir, double theta, double gap_min, double len_min,
                      int window) {
    DatasetManifest manifest = read_manifest(dir);
    std::vector<SampleIndexEntry> entries;
    int skipped = 0;
    for (size_t i = 0; i < manifest.recordings.size(); ++i) {
        const ManifestEntry& me = manifest.recordings[i];
        if (me.file.empty()) continue;
        Recording rec = read_recording(dir + "/" + me.file);
        const auto segs = auto_segment(rec, theta, gap_min, len_min);
        std::vector<std::string> warnings;
        const auto samples = extract_samples(rec, segs, window, static_cast<int>(i), &warnings);
        for (const auto& w : warnings) {
            std::cerr << w << "\n";
            ++skipped;
        }
        for (const GestureSample& s : samples) {
            entries.push_back({static_cast<int>(i), s.source_segment.end_frame - window + 1,
                               s.source_segment.end_frame, static_cast<int>(s.label)});
        }
    }
    write_sample_index(dir, entries);
    std::cout << "wrote " << entries.size() << " samples to " << dir << "/samples.idx";
    if (skipped > 0) std::cout << " (" << skipped << " ambiguous segments skipped)";
    std::cout << "\n";
    return 0;
}

int cmd_train(const std::string& dir, const std::string& out_model,
              const std::string& metrics_path, const TrainConfig& tc, int layers, int hidden,
              const std::string& pooling, int window) {
    LoadedDataset ds = load_labeled_dataset(dir, window);
    if (ds.samples.empty()) {
        std::cerr << "no samples in " << dir << " (run `taxel dataset label` first)\n";
        return 1;
    }
    StaticEdges statics(ds.skin);

    EgnnConfig cfg;
    cfg.layers = layers;
    cfg.hidden = hidden;
    cfg.pooling = pooling == "mean" ? Pooling::mean : Pooling::max;

    TrainResult result = train_egnn(ds.skin, statics, cfg, ds.samples, tc);
    if (result.diverged) {
        std::cerr << "training diverged; emitting history and stopping\n";
    }
    save_model(out_model, result.model);

    if (metrics_path.empty() || metrics_path == "-") {
        write_metrics_csv(std::cout, result.history);
    } else {
        std::ofstream out(metrics_path, std::ios::binary);
        write_metrics_csv(out, result.history);
    }
    return result.diverged ? 1 : 0;
}

int cmd_eval(const std::string& dir, const std::string& model_kind,
             const std::string& checkpoint, const std::string& train_dir, int window, int stride,
             double theta_act, int k, int k_nn) {
    LoadedDataset test = load_labeled_dataset(dir, window);
    if (test.samples.empty()) {
        std::cerr << "no samples in " << dir << "\n";
        return 1;
    }

    double acc = 0.0;
    if (model_kind == "egnn") {
        if (checkpoint.empty()) {
            std::cerr << "eval --model egnn needs --checkpoint\n";
            return 1;
        }
        EgnnModel model = load_model(checkpoint);
        StaticEdges statics(test.skin);
        if (model.skin_hash != statics.skin_hash()) {
            std::cerr << "checkpoint was trained against a different skin config\n";
            return 1;
        }
        acc = evaluate_egnn(model, test.skin, statics, test.samples, theta_act, k, stride);
    } else {
        if (train_dir.empty()) {
            std::cerr << "eval --model " << model_kind << " needs --train-dataset\n";
            return 1;
        }
        LoadedDataset train = load_labeled_dataset(train_dir, window);
        std::vector<FlatSample> train_flat, test_flat;
        for (const TrainSample& s : train.samples) {
            train_flat.push_back(flatten(s.frames, s.label, stride));
        }
        for (const TrainSample& s : test.samples) {
            test_flat.push_back(flatten(s.frames, s.label, stride));
        }
        int correct = 0;
        if (model_kind == "knn") {
            for (const FlatSample& s : test_flat) {
                if (knn_classify(train_flat, s.vec, k_nn) == s.label) ++correct;
            }
        } else if (model_kind == "mlp") {
            MlpBaselineConfig cfg;
            MlpBaseline mlp = mlp_train(train_flat, cfg);
            for (const FlatSample& s : test_flat) {
                if (mlp_classify(mlp, s.vec) == s.label) ++correct;
            }
        } else {
            std::cerr << "unknown model '" << model_kind << "' (egnn|knn|mlp)\n";
            return 1;
        }
        acc = static_cast<double>(correct) / test_flat.size();
    }

    char line[160];
    std::cout << "model,dataset,n_samples,accuracy\n";
    std::snprintf(line, sizeof(line), "%s,%s,%zu,%.6f\n", model_kind.c_str(), dir.c_str(),
                  test.samples.size(), acc);
    std::cout << line;
    return 0;
}

int cmd_ablate(const std::string& dir, const std::string& test_dir, const std::string& out_csv,
               const std::string& grid_k_str, const std::string& pool_str, TrainConfig tc,
               int layers, int hidden, int window) {
    LoadedDataset train = load_labeled_dataset(dir, window);
    LoadedDataset test;
    if (!test_dir.empty()) test = load_labeled_dataset(test_dir, window);
    StaticEdges statics(train.skin);

    std::vector<int> ks;
    {
        std::stringstream ss(grid_k_str);
        std::string item;
        while (std::getline(ss, item, ',')) ks.push_back(std::stoi(item));
    }
    std::vector<std::string> pools;
    {
        std::stringstream ss(pool_str);
        std::string item;
        while (std::getline(ss, item, ',')) pools.push_back(item);
    }

    std::ostringstream csv;
    csv << "k,pooling,val_acc,test_acc\n";
    for (int k : ks) {
        for (const std::string& pool : pools) {
            EgnnConfig cfg;
            cfg.layers = layers;
            cfg.hidden = hidden;
            cfg.pooling = pool == "mean" ? Pooling::mean : Pooling::max;
            TrainConfig cell_tc = tc;
            cell_tc.k = k;
            double val_acc = 0.0, test_acc = 0.0;
            try {
                TrainResult r = train_egnn(train.skin, statics, cfg, train.samples, cell_tc);
                val_acc = r.history.empty() ? 0.0 : r.history.back().val_acc;
                if (!test.samples.empty()) {
                    test_acc = evaluate_egnn(r.model, train.skin, statics, test.samples,
                                             cell_tc.theta_act, k, cell_tc.stride);
                }
            } catch (const std::exception& e) {
                std::cerr << "cell k=" << k << " pool=" << pool << " failed: " << e.what()
                          << "\n";
            }
            char line[128];
            std::snprintf(line, sizeof(line), "%d,%s,%.6f,%.6f\n", k, pool.c_str(), val_acc,
                          test_acc);
            csv << line;
            std::cerr << "ablation cell done: " << line;
        }
    }
    if (out_csv.empty() || out_csv == "-") {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_csv, std::ios::binary);
        out << csv.str();
    }
    return 0;
}

int cmd_bench(const std::string& config_path, const std::string& checkpoint, double active_frac,
              int iters, int stride, int k, double theta_act, uint64_t seed) {
    SkinConfig skin = load_validated_skin(config_path);
    StaticEdges statics(skin);

    EgnnModel model = checkpoint.empty() ? EgnnModel::init(EgnnConfig{}, seed)
                                         : load_model(checkpoint);

    RecognizerConfig rc;
    rc.theta_act = theta_act;
    rc.k = k;
    rc.stride = stride;

    LoadProfile load;
    load.active_fraction = active_frac;
    load.seed = seed;

    BenchReport report = run_recognition_bench(skin, statics, model, load, iters, rc);

    char line[160];
    std::cout << "stage,mean_ms,p50_ms,p99_ms\n";
    std::snprintf(line, sizeof(line), "graph_build,%.4f,%.4f,%.4f\n", report.graph_build.mean_ms,
                  report.graph_build.p50_ms, report.graph_build.p99_ms);
    std::cout << line;
    std::snprintf(line, sizeof(line), "forward,%.4f,%.4f,%.4f\n", report.forward.mean_ms,
                  report.forward.p50_ms, report.forward.p99_ms);
    std::cout << line;
    std::snprintf(line, sizeof(line), "total,%.4f,%.4f,%.4f\n", report.total.mean_ms,
                  report.total.p50_ms, report.total.p99_ms);
    std::cout << line;
    std::cout << "# iterations: " << report.iterations << ", active fraction "
              << report.active_fraction << "\n";
    std::cout << "# machine: " << report.machine << "\n";
    std::cout << "# reference: 3.81 ms single-step on the original system\n";
    return 0;
}

int run_demo_stream(std::istream& in, const SkinConfig& skin, const StaticEdges& statics,
                    const EgnnModel& model, const RecognizerConfig& rc) {
    StreamRecognizer recognizer(skin, statics, model, rc);
    RobotActionState state;
    std::cout << "frame,gesture,confidence,running,gripper_closed,waypoint_index\n";
    while (auto frame = read_frame_message(in, skin.num_taxels(), skin.chain.num_links())) {
        auto event = recognizer.push(
            {frame->pressure.data(), static_cast<size_t>(frame->pressure.size())}, frame->q);
        if (event) {
            state = apply_gesture(state, event->cls);
            char line[160];
            std::snprintf(line, sizeof(line), "%ld,%s,%.4f,%d,%d,%u\n", event->frame,
                          to_string(event->cls), event->confidence, state.running ? 1 : 0,
                          state.gripper_closed ? 1 : 0, state.waypoint_index);
            std::cout << line << std::flush;
        }
    }
    return 0;
}

int cmd_demo(const std::string& config_path, const std::string& checkpoint,
             const std::string& in_path, int listen_port, const RecognizerConfig& rc) {
    SkinConfig skin = load_validated_skin(config_path);
    StaticEdges statics(skin);
    EgnnModel model = load_model(checkpoint);
    if (model.skin_hash != statics.skin_hash()) {
        std::cerr << "checkpoint was trained against a different skin config\n";
        return 1;
    }

    if (listen_port > 0) {
        const int server = ::socket(AF_INET, SOCK_STREAM, 0);
        if (server < 0) {
            std::cerr << "socket() failed\n";
            return 1;
        }
        int opt = 1;
        ::setsockopt(server, SOL_SOCKET, SO_REUSEADDR, &opt, sizeof(opt));
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
        addr.sin_port = htons(static_cast<uint16_t>(listen_port));
        if (::bind(server, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
            ::listen(server, 1) != 0) {
            std::cerr << "cannot listen on 127.0.0.1:" << listen_port << "\n";
            ::close(server);
            return 1;
        }
        std::cerr << "listening on 127.0.0.1:" << listen_port << "\n";
        const int conn = ::accept(server, nullptr, nullptr);
        if (conn < 0) {
            ::close(server);
            return 1;
        }
        // Drain the socket into a buffer stream, then run the pipeline.
        std::stringstream buffer;
        char chunk[4096];
        ssize_t got;
        while ((got = ::read(conn, chunk, sizeof(chunk))) > 0) buffer.write(chunk, got);
        ::close(conn);
        ::close(server);
        return run_demo_stream(buffer, skin, statics, model, rc);
    }

    std::ifstream in(in_path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot open frame stream " << in_path << "\n";
        return 1;
    }
    return run_demo_stream(in, skin, statics, model, rc);
}

int cmd_graph_dump(const std::string& config_path, const std::string& recording_path, int frame,
                   const std::string& press_spec, const std::string& q_spec, double theta_act,
                   int k) {
    SkinConfig skin = load_validated_skin(config_path);
    StaticEdges statics(skin);

    Eigen::VectorXf pressure = Eigen::VectorXf::Zero(skin.num_taxels());
    JointState q = JointState::Zero(skin.chain.num_links());

    if (!recording_path.empty()) {
        Recording rec = read_recording(recording_path);
        if (frame < 0 || frame >= static_cast<int>(rec.frames.size())) {
            std::cerr << "frame " << frame << " out of range\n";
            return 1;
        }
        pressure = rec.frames[frame].pressure;
        q = rec.frames[frame].q;
    } else {
        std::stringstream ss(press_spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            int id;
            double value;
            if (std::sscanf(item.c_str(), "%d=%lf", &id, &value) != 2 || id < 0 ||
                id >= skin.num_taxels()) {
                std::cerr << "bad --press entry '" << item << "' (want taxel=pressure)\n";
                return 1;
            }
            pressure[id] = static_cast<float>(value);
        }
    }
    if (!q_spec.empty()) {
        std::stringstream ss(q_spec);
        std::string item;
        int j = 0;
        while (std::getline(ss, item, ',') && j < q.size()) q[j++] = std::stod(item);
    }

    TactileGraph graph = build_graph(skin, statics, q,
                                     {pressure.data(), static_cast<size_t>(pressure.size())},
                                     theta_act, k);
    write_graph_dump(std::cout, graph);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tactile gesture recognition pipeline"};
    app.require_subcommand(1);

    // skin
    auto* skin_cmd = app.add_subcommand("skin", "skin configuration utilities");
    skin_cmd->require_subcommand(1);
    std::string skin_path;
    auto* validate = skin_cmd->add_subcommand("validate", "check every config invariant");
    validate->add_option("config", skin_path, "skin config JSON")->required();
    std::string gen_out, gen_rig = "ur5";
    auto* generate = skin_cmd->add_subcommand("generate", "write a built-in configuration");
    generate->add_option("output", gen_out, "output JSON path")->required();
    generate->add_option("--rig", gen_rig, "ur5 | fold");

    // dataset
    auto* dataset_cmd = app.add_subcommand("dataset", "synthesize and label gesture datasets");
    dataset_cmd->require_subcommand(1);
    std::string ds_dir, ds_config, ds_counts = "145,145,145,146";
    uint64_t ds_seed = 1;
    int ds_poses = 12;
    double ds_fs = 50.0, ds_noise = 0.01, ds_theta = 0.05, ds_joint_range = 1.9;
    auto* synth = dataset_cmd->add_subcommand("synth", "generate labeled recordings");
    synth->add_option("output_dir", ds_dir)->required();
    synth->add_option("--config", ds_config, "skin config JSON")->required();
    synth->add_option("--counts", ds_counts, "recordings per class");
    synth->add_option("--seed", ds_seed);
    synth->add_option("--poses", ds_poses, "stationary pose pool size");
    synth->add_option("--fs", ds_fs);
    synth->add_option("--noise", ds_noise, "sensor noise sigma");
    synth->add_option("--theta-label", ds_theta);
    synth->add_option("--joint-range", ds_joint_range, "uniform per-joint range (+/- rad)");

    std::string label_dir;
    double label_theta = 0.05, label_gap = 0.4, label_len = 0.06;
    int label_window = 100;
    auto* label = dataset_cmd->add_subcommand("label", "segment recordings into samples.idx");
    label->add_option("dataset_dir", label_dir)->required();
    label->add_option("--theta", label_theta);
    label->add_option("--gap-min", label_gap, "merge gaps shorter than this (s)");
    label->add_option("--len-min", label_len, "drop segments shorter than this (s)");
    label->add_option("--window", label_window);

    // train
    std::string train_dir, train_out = "model.egn1", train_metrics;
    TrainConfig tc;
    int train_layers = 3, train_hidden = 32, train_window = 100;
    std::string train_pooling = "max";
    auto* train = app.add_subcommand("train", "train the graph classifier");
    train->add_option("dataset_dir", train_dir)->required();
    train->add_option("--out", train_out, "checkpoint path");
    train->add_option("--metrics", train_metrics, "per-epoch CSV (default stdout)");
    train->add_option("--epochs", tc.epochs);
    train->add_option("--batch", tc.batch_size);
    train->add_option("--lr", tc.lr);
    train->add_option("--seed", tc.seed);
    train->add_option("--l2", tc.l2);
    train->add_option("--val-fraction", tc.val_fraction);
    train->add_option("--stride", tc.stride, "window temporal stride");
    train->add_option("--theta-act", tc.theta_act);
    train->add_option("--k", tc.k, "KNN neighbors");
    train->add_option("--early-stop-val", tc.early_stop_val_acc);
    train->add_option("--layers", train_layers);
    train->add_option("--hidden", train_hidden);
    train->add_option("--pooling", train_pooling, "max | mean");
    train->add_option("--window", train_window);

    // eval
    std::string eval_dir, eval_model = "egnn", eval_checkpoint, eval_train_dir;
    int eval_window = 100, eval_stride = 1, eval_k = 8, eval_knn_k = 5;
    double eval_theta = 0.05;
    auto* eval = app.add_subcommand("eval", "evaluate a classifier on a labeled dataset");
    eval->add_option("dataset_dir", eval_dir)->required();
    eval->add_option("--model", eval_model, "egnn | knn | mlp");
    eval->add_option("--checkpoint", eval_checkpoint, "EGN1 model (egnn)");
    eval->add_option("--train-dataset", eval_train_dir, "training data (knn/mlp)");
    eval->add_option("--window", eval_window);
    eval->add_option("--stride", eval_stride);
    eval->add_option("--theta-act", eval_theta);
    eval->add_option("--k", eval_k);
    eval->add_option("--k-nn", eval_knn_k, "baseline neighbor count");

    // ablate
    std::string abl_dir, abl_test_dir, abl_out = "-", abl_grid_k = "4,8,16,32",
                abl_pools = "max,mean";
    TrainConfig abl_tc;
    int abl_layers = 3, abl_hidden = 32, abl_window = 100;
    auto* ablate = app.add_subcommand("ablate", "k x pooling ablation grid");
    ablate->add_option("dataset_dir", abl_dir)->required();
    ablate->add_option("--test-dataset", abl_test_dir);
    ablate->add_option("--out", abl_out, "CSV path (default stdout)");
    ablate->add_option("--grid-k", abl_grid_k);
    ablate->add_option("--pool", abl_pools);
    ablate->add_option("--epochs", abl_tc.epochs);
    ablate->add_option("--batch", abl_tc.batch_size);
    ablate->add_option("--lr", abl_tc.lr);
    ablate->add_option("--seed", abl_tc.seed);
    ablate->add_option("--stride", abl_tc.stride);
    ablate->add_option("--layers", abl_layers);
    ablate->add_option("--hidden", abl_hidden);
    ablate->add_option("--window", abl_window);

    // bench
    std::string bench_config, bench_checkpoint;
    double bench_frac = 0.05, bench_theta = 0.05;
    int bench_iters = 1000, bench_stride = 5, bench_k = 8;
    uint64_t bench_seed = 7;
    auto* bench = app.add_subcommand("bench", "recognition-step runtime benchmark");
    bench->add_option("--config", bench_config, "skin config JSON")->required();
    bench->add_option("--checkpoint", bench_checkpoint, "EGN1 model (default: fresh init)");
    bench->add_option("--active-frac", bench_frac);
    bench->add_option("--iters", bench_iters);
    bench->add_option("--stride", bench_stride);
    bench->add_option("--k", bench_k);
    bench->add_option("--theta-act", bench_theta);
    bench->add_option("--seed", bench_seed);

    // demo
    std::string demo_config, demo_checkpoint, demo_in;
    int demo_port = 0;
    RecognizerConfig demo_rc;
    auto* demo = app.add_subcommand("demo", "streaming recognition and action mapping");
    demo->add_option("--config", demo_config)->required();
    demo->add_option("--checkpoint", demo_checkpoint)->required();
    demo->add_option("--in", demo_in, "TGF1 frame stream file");
    demo->add_option("--listen", demo_port, "accept one TGF1 stream on 127.0.0.1:PORT");
    demo->add_option("--theta-act", demo_rc.theta_act);
    demo->add_option("--k", demo_rc.k);
    demo->add_option("--stride", demo_rc.stride);
    demo->add_option("--fs", demo_rc.fs);
    demo->add_option("--gap-min", demo_rc.gap_min_s);

    // graph dump
    auto* graph_cmd = app.add_subcommand("graph", "tactile graph utilities");
    graph_cmd->require_subcommand(1);
    std::string dump_config, dump_recording, dump_press, dump_q;
    int dump_frame = 0, dump_k = 8;
    double dump_theta = 0.05;
    auto* dump = graph_cmd->add_subcommand("dump", "print one frame's graph as text");
    dump->add_option("--config", dump_config)->required();
    dump->add_option("--recording", dump_recording, "TGR1 recording to read");
    dump->add_option("--frame", dump_frame);
    dump->add_option("--press", dump_press, "synthetic frame: taxel=pressure,...");
    dump->add_option("--q", dump_q, "joint angles, comma separated");
    dump->add_option("--theta-act", dump_theta);
    dump->add_option("--k", dump_k);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) return cmd_skin_validate(skin_path);
        if (*generate) return cmd_skin_generate(gen_out, gen_rig);
        if (*synth) {
            return cmd_dataset_synth(ds_dir, ds_config, ds_counts, ds_seed, ds_poses, ds_fs,
                                     ds_noise, ds_theta, ds_joint_range);
        }
        if (*label) return cmd_dataset_label(label_dir, label_theta, label_gap, label_len,
                                             label_window);
        if (*train) {
            return cmd_train(train_dir, train_out, train_metrics, tc, train_layers, train_hidden,
                             train_pooling, train_window);
        }
        if (*eval) {
            return cmd_eval(eval_dir, eval_model, eval_checkpoint, eval_train_dir, eval_window,
                            eval_stride, eval_theta, eval_k, eval_knn_k);
        }
        if (*ablate) {
            return cmd_ablate(abl_dir, abl_test_dir, abl_out, abl_grid_k, abl_pools, abl_tc,
                              abl_layers, abl_hidden, abl_window);
        }
        if (*bench) {
            return cmd_bench(bench_config, bench_checkpoint, bench_frac, bench_iters,
                             bench_stride, bench_k, bench_theta, bench_seed);
        }
        if (*demo) return cmd_demo(demo_config, demo_checkpoint, demo_in, demo_port, demo_rc);
        if (*dump) {
            return cmd_graph_dump(dump_config, dump_recording, dump_frame, dump_press, dump_q,
                                  dump_theta, dump_k);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
