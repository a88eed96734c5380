#include "taxelgraph/dataset_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace taxelgraph {

namespace {

constexpr uint32_t kRecordingMagic = 0x31524754u;   // "TGR1" little-endian
constexpr uint32_t kUnlabeled = 0xffffffffu;

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("truncated recording file");
    return v;
}

} // namespace

void write_recording(const std::string& path, const Recording& rec) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write recording: " + path);

    const uint32_t n_frames = static_cast<uint32_t>(rec.frames.size());
    const uint32_t n_taxels = n_frames > 0 ? static_cast<uint32_t>(rec.frames[0].pressure.size()) : 0;
    const uint32_t n_joints = n_frames > 0 ? static_cast<uint32_t>(rec.frames[0].q.size()) : 0;

    put(out, kRecordingMagic);
    put(out, n_taxels);
    put(out, n_frames);
    put(out, static_cast<float>(rec.fs));
    put(out, n_joints);
    put(out, static_cast<uint32_t>(rec.ground_truth.size()));

    for (const PressureFrame& f : rec.frames) {
        out.write(reinterpret_cast<const char*>(f.pressure.data()),
                  static_cast<std::streamsize>(n_taxels * sizeof(float)));
    }
    for (const PressureFrame& f : rec.frames) {
        for (uint32_t j = 0; j < n_joints; ++j) put(out, static_cast<float>(f.q[j]));
    }
    for (const LabeledSpan& s : rec.ground_truth) {
        put(out, static_cast<uint32_t>(s.start_frame));
        put(out, static_cast<uint32_t>(s.end_frame));
        put(out, static_cast<uint32_t>(s.cls));
    }
}

Recording read_recording(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open recording: " + path);

    if (get<uint32_t>(in) != kRecordingMagic) {
        throw std::runtime_error(path + ": not a TGR1 recording");
    }
    const uint32_t n_taxels = get<uint32_t>(in);
    const uint32_t n_frames = get<uint32_t>(in);
    const float fs = get<float>(in);
    const uint32_t n_joints = get<uint32_t>(in);
    const uint32_t n_segments = get<uint32_t>(in);

    Recording rec;
    rec.fs = fs;
    rec.frames.resize(n_frames);
    for (uint32_t f = 0; f < n_frames; ++f) {
        rec.frames[f].t = f / rec.fs;
        rec.frames[f].pressure.resize(n_taxels);
        in.read(reinterpret_cast<char*>(rec.frames[f].pressure.data()),
                static_cast<std::streamsize>(n_taxels * sizeof(float)));
        if (!in) throw std::runtime_error("truncated recording file");
    }
    for (uint32_t f = 0; f < n_frames; ++f) {
        rec.frames[f].q.resize(n_joints);
        for (uint32_t j = 0; j < n_joints; ++j) rec.frames[f].q[j] = get<float>(in);
    }
    for (uint32_t s = 0; s < n_segments; ++s) {
        LabeledSpan span;
        span.start_frame = static_cast<int>(get<uint32_t>(in));
        span.end_frame = static_cast<int>(get<uint32_t>(in));
        const uint32_t cls = get<uint32_t>(in);
        if (cls != kUnlabeled) span.cls = static_cast<GestureClass>(cls);
        rec.ground_truth.push_back(span);
    }
    return rec;
}

void write_manifest(const std::string& dir, const DatasetManifest& m) {
    nlohmann::json j;
    j["schema_version"] = 1;
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(m.skin_hash));
    j["skin_config_hash"] = hex;
    j["seed"] = m.seed;
    j["fs"] = m.fs;
    j["n_taxels"] = m.n_taxels;
    for (int c = 0; c < kNumGestureClasses; ++c) {
        j["counts"][kGestureNames[c]] = m.counts[c];
    }
    j["recordings"] = nlohmann::json::array();
    for (const ManifestEntry& e : m.recordings) {
        j["recordings"].push_back({{"file", e.file},
                                   {"gesture", e.gesture},
                                   {"pose_index", e.pose_index},
                                   {"error", e.error}});
    }
    std::ofstream out(dir + "/manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest in " + dir);
    out << j.dump(1) << '\n';
}

DatasetManifest read_manifest(const std::string& dir) {
    std::ifstream in(dir + "/manifest.json", std::ios::binary);
    if (!in) throw std::runtime_error("cannot open manifest in " + dir);
    nlohmann::json j;
    in >> j;

    DatasetManifest m;
    m.skin_hash = std::stoull(j.at("skin_config_hash").get<std::string>(), nullptr, 16);
    m.seed = j.at("seed").get<uint64_t>();
    m.fs = j.at("fs").get<double>();
    m.n_taxels = j.at("n_taxels").get<int>();
    for (int c = 0; c < kNumGestureClasses; ++c) {
        m.counts[c] = j.at("counts").at(kGestureNames[c]).get<int>();
    }
    for (const auto& je : j.at("recordings")) {
        ManifestEntry e;
        e.file = je.at("file").get<std::string>();
        e.gesture = je.at("gesture").get<std::string>();
        e.pose_index = je.at("pose_index").get<int>();
        e.error = je.at("error").get<std::string>();
        m.recordings.push_back(std::move(e));
    }
    return m;
}

void write_sample_index(const std::string& dir, const std::vector<SampleIndexEntry>& samples) {
    std::ofstream out(dir + "/samples.idx", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write samples.idx in " + dir);
    out << "recording,window_start,window_end,class_id\n";
    for (const SampleIndexEntry& s : samples) {
        out << s.recording << ',' << s.window_start << ',' << s.window_end << ',' << s.class_id
            << '\n';
    }
}

std::vector<SampleIndexEntry> read_sample_index(const std::string& dir) {
    std::ifstream in(dir + "/samples.idx", std::ios::binary);
    if (!in) throw std::runtime_error("cannot open samples.idx in " + dir);
    std::vector<SampleIndexEntry> out;
    std::string line;
    std::getline(in, line);   // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        SampleIndexEntry s;
        if (std::sscanf(line.c_str(), "%d,%d,%d,%d", &s.recording, &s.window_start,
                        &s.window_end, &s.class_id) != 4) {
            throw std::runtime_error("malformed samples.idx line: " + line);
        }
        out.push_back(s);
    }
    return out;
}

std::string recording_filename(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "rec_%05d.tgr", index);
    return buf;
}

} // namespace taxelgraph
