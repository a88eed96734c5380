#include "taxelgraph/model_io.hpp"

#include <fstream>
#include <stdexcept>

namespace taxelgraph {

namespace {

constexpr uint32_t kModelMagic = 0x314e4745u;   // "EGN1" little-endian
constexpr uint32_t kModelVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("truncated model file");
    return v;
}

void write_tensor(std::ostream& out, const MatrixXd& m) {
    put(out, static_cast<uint32_t>(m.rows()));
    put(out, static_cast<uint32_t>(m.cols()));
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
}

void write_tensor(std::ostream& out, const VectorXd& v) {
    put(out, static_cast<uint32_t>(v.size()));
    put(out, 1u);
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_into(std::istream& in, double* data, std::ptrdiff_t rows, std::ptrdiff_t cols) {
    const auto r = get<uint32_t>(in);
    const auto c = get<uint32_t>(in);
    if (r != rows || c != cols) {
        throw std::runtime_error("model tensor dimension mismatch: file " + std::to_string(r) +
                                 "x" + std::to_string(c) + ", expected " + std::to_string(rows) +
                                 "x" + std::to_string(cols));
    }
    in.read(reinterpret_cast<char*>(data),
            static_cast<std::streamsize>(rows * cols * sizeof(double)));
    if (!in) throw std::runtime_error("truncated model file");
}

template <typename Fn>
void visit_tensors(EgnnModel& model, Fn&& fn) {
    auto mlp = [&fn](Mlp& m) {
        for (size_t k = 0; k < m.weights.size(); ++k) {
            fn(m.weights[k].data(), m.weights[k].rows(), m.weights[k].cols());
            if (m.biases[k].size() > 0) fn(m.biases[k].data(), m.biases[k].size(), 1);
        }
    };
    for (EgclParams& l : model.layers) {
        mlp(l.phi_e);
        mlp(l.phi_x);
        mlp(l.phi_h);
    }
    mlp(model.readout);
}

} // namespace

void save_model(const std::string& path, const EgnnModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model: " + path);

    put(out, kModelMagic);
    put(out, kModelVersion);
    put(out, static_cast<uint32_t>(model.cfg.layers));
    put(out, static_cast<uint32_t>(model.cfg.hidden));
    put(out, static_cast<uint32_t>(model.cfg.node_in));
    put(out, static_cast<uint32_t>(model.cfg.edge_attr));
    put(out, static_cast<uint32_t>(model.cfg.readout_hidden));
    put(out, static_cast<uint32_t>(model.cfg.pooling));
    put(out, model.skin_hash);

    uint32_t n_tensors = 0;
    visit_tensors(const_cast<EgnnModel&>(model),
                  [&n_tensors](double*, std::ptrdiff_t, std::ptrdiff_t) { ++n_tensors; });
    put(out, n_tensors);

    auto& m = const_cast<EgnnModel&>(model);
    auto mlp = [&out](Mlp& mm) {
        for (size_t k = 0; k < mm.weights.size(); ++k) {
            write_tensor(out, mm.weights[k]);
            if (mm.biases[k].size() > 0) write_tensor(out, mm.biases[k]);
        }
    };
    for (EgclParams& l : m.layers) {
        mlp(l.phi_e);
        mlp(l.phi_x);
        mlp(l.phi_h);
    }
    mlp(m.readout);
}

EgnnModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model: " + path);

    if (get<uint32_t>(in) != kModelMagic) throw std::runtime_error(path + ": not an EGN1 model");
    if (get<uint32_t>(in) != kModelVersion) {
        throw std::runtime_error(path + ": unsupported model version");
    }
    EgnnConfig cfg;
    cfg.layers = static_cast<int>(get<uint32_t>(in));
    cfg.hidden = static_cast<int>(get<uint32_t>(in));
    cfg.node_in = static_cast<int>(get<uint32_t>(in));
    cfg.edge_attr = static_cast<int>(get<uint32_t>(in));
    cfg.readout_hidden = static_cast<int>(get<uint32_t>(in));
    cfg.pooling = static_cast<Pooling>(get<uint32_t>(in));
    const uint64_t skin_hash = get<uint64_t>(in);

    EgnnModel model = EgnnModel::init(cfg, 0);
    model.skin_hash = skin_hash;

    uint32_t expected = 0;
    visit_tensors(model, [&expected](double*, std::ptrdiff_t, std::ptrdiff_t) { ++expected; });
    const uint32_t n_tensors = get<uint32_t>(in);
    if (n_tensors != expected) {
        throw std::runtime_error(path + ": tensor count mismatch");
    }
    visit_tensors(model, [&in](double* data, std::ptrdiff_t rows, std::ptrdiff_t cols) {
        read_into(in, data, rows, cols);
    });
    return model;
}

} // namespace taxelgraph
