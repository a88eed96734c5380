#include "taxelgraph/config_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace taxelgraph {

namespace {

using nlohmann::json;

json transform_to_json(const RigidTransform& t) {
    return json{{"rotation", {t.rotation.w(), t.rotation.x(), t.rotation.y(), t.rotation.z()}},
                {"translation", {t.translation.x(), t.translation.y(), t.translation.z()}}};
}

RigidTransform transform_from_json(const json& j) {
    const auto& q = j.at("rotation");
    const auto& t = j.at("translation");
    RigidTransform out;
    out.rotation = Eigen::Quaterniond(q.at(0).get<double>(), q.at(1).get<double>(),
                                      q.at(2).get<double>(), q.at(3).get<double>());
    if (std::abs(out.rotation.norm() - 1.0) > 1e-6) {
        throw std::runtime_error("transform rotation quaternion is not normalized");
    }
    out.rotation.normalize();
    out.translation = Vec3(t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>());
    return out;
}

json vec3_to_json(const Vec3& v) { return json{v.x(), v.y(), v.z()}; }

Vec3 vec3_from_json(const json& j) {
    return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

} // namespace

std::string skin_to_json(const SkinConfig& skin) {
    json j;
    j["schema_version"] = 1;
    j["name"] = skin.name;

    json chain;
    chain["base_transform"] = transform_to_json(skin.chain.base);
    chain["joints"] = json::array();
    for (const Joint& joint : skin.chain.joints) {
        chain["joints"].push_back(
            {{"axis", vec3_to_json(joint.axis)}, {"origin", transform_to_json(joint.origin)}});
    }
    j["chain"] = std::move(chain);

    j["patches"] = json::array();
    for (const Patch& p : skin.patches) {
        json jp;
        jp["patch_id"] = p.patch_id;
        jp["link_index"] = p.link_index;
        jp["mount_transform"] = transform_to_json(p.mount);
        jp["taxels"] = json::array();
        for (int id : p.taxel_ids) {
            const Taxel& t = skin.taxels.at(id);
            jp["taxels"].push_back({{"id", t.id},
                                    {"position", vec3_to_json(t.local_position)},
                                    {"normal", vec3_to_json(t.local_normal)},
                                    {"area", t.cell_area}});
        }
        jp["adjacency"] = json::array();
        for (const MeshEdge& e : p.adjacency) {
            jp["adjacency"].push_back({e.a, e.b, e.rest_length});
        }
        j["patches"].push_back(std::move(jp));
    }
    return j.dump();
}

SkinConfig skin_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("schema_version").get<int>() != 1) {
        throw std::runtime_error("unsupported skin config schema_version");
    }
    SkinConfig skin;
    skin.name = j.value("name", "");
    skin.chain.base = transform_from_json(j.at("chain").at("base_transform"));
    for (const json& jj : j.at("chain").at("joints")) {
        Joint joint;
        joint.axis = vec3_from_json(jj.at("axis"));
        joint.origin = transform_from_json(jj.at("origin"));
        skin.chain.joints.push_back(joint);
    }

    // Collect taxels first (ids are global), then size the dense table.
    int max_id = -1;
    for (const json& jp : j.at("patches")) {
        for (const json& jt : jp.at("taxels")) {
            max_id = std::max(max_id, jt.at("id").get<int>());
        }
    }
    skin.taxels.resize(max_id + 1);

    for (const json& jp : j.at("patches")) {
        Patch p;
        p.patch_id = jp.at("patch_id").get<int>();
        p.link_index = jp.at("link_index").get<int>();
        p.mount = transform_from_json(jp.at("mount_transform"));
        for (const json& jt : jp.at("taxels")) {
            Taxel t;
            t.id = jt.at("id").get<int>();
            t.patch_id = p.patch_id;
            t.local_position = vec3_from_json(jt.at("position"));
            t.local_normal = vec3_from_json(jt.at("normal"));
            t.cell_area = jt.at("area").get<double>();
            if (t.id < 0 || t.id > max_id) throw std::runtime_error("taxel id out of range");
            skin.taxels[t.id] = t;
            p.taxel_ids.push_back(t.id);
        }
        for (const json& je : jp.at("adjacency")) {
            MeshEdge e;
            e.a = je.at(0).get<int>();
            e.b = je.at(1).get<int>();
            e.rest_length = je.at(2).get<double>();
            p.adjacency.push_back(e);
        }
        skin.patches.push_back(std::move(p));
    }
    return skin;
}

SkinConfig load_skin_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open skin config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return skin_from_json(ss.str());
}

void save_skin_config(const SkinConfig& skin, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write skin config: " + path);
    out << skin_to_json(skin);
    out << '\n';
}

} // namespace taxelgraph
