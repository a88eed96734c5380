#include "taxelgraph/builders.hpp"

#include <cmath>

namespace taxelgraph {

int add_grid_patch(SkinConfig& skin, int link_index, const RigidTransform& mount,
                   const GridPatchSpec& spec) {
    Patch patch;
    patch.patch_id = static_cast<int>(skin.patches.size());
    patch.link_index = link_index;
    patch.mount = mount;

    const int base_id = skin.num_taxels();
    const double area = spec.pitch * spec.pitch;

    auto id_at = [&](int row, int col) {
        return base_id + row * spec.cols + ((col % spec.cols) + spec.cols) % spec.cols;
    };

    if (spec.wrap) {
        // Cylinder band about patch z: column sweeps the circumference.
        const double radius = spec.cols * spec.pitch / (2.0 * M_PI);
        const double dtheta = 2.0 * M_PI / spec.cols;
        for (int r = 0; r < spec.rows; ++r) {
            for (int c = 0; c < spec.cols; ++c) {
                Taxel t;
                t.id = id_at(r, c);
                t.patch_id = patch.patch_id;
                const double theta = c * dtheta;
                t.local_position = Vec3(radius * std::cos(theta), radius * std::sin(theta),
                                        r * spec.pitch);
                t.local_normal = Vec3(std::cos(theta), std::sin(theta), 0.0);
                t.cell_area = area;
                skin.taxels.push_back(t);
                patch.taxel_ids.push_back(t.id);
            }
        }
    } else {
        for (int r = 0; r < spec.rows; ++r) {
            for (int c = 0; c < spec.cols; ++c) {
                Taxel t;
                t.id = id_at(r, c);
                t.patch_id = patch.patch_id;
                t.local_position = Vec3(c * spec.pitch, r * spec.pitch, 0.0);
                t.local_normal = Vec3(0.0, 0.0, 1.0);
                t.cell_area = area;
                skin.taxels.push_back(t);
                patch.taxel_ids.push_back(t.id);
            }
        }
    }

    auto connect = [&](int ida, int idb) {
        const double d =
            (skin.taxels[ida].local_position - skin.taxels[idb].local_position).norm();
        patch.adjacency.push_back({std::min(ida, idb), std::max(ida, idb), d});
    };

    const int col_span = spec.wrap ? spec.cols : spec.cols - 1;
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < col_span; ++c) connect(id_at(r, c), id_at(r, c + 1));
    }
    for (int c = 0; c < spec.cols; ++c) {
        for (int r = 0; r + 1 < spec.rows; ++r) connect(id_at(r, c), id_at(r + 1, c));
    }
    if (spec.diagonals) {
        for (int r = 0; r + 1 < spec.rows; ++r) {
            for (int c = 0; c < col_span; ++c) {
                connect(id_at(r, c), id_at(r + 1, c + 1));
                connect(id_at(r, c + 1), id_at(r + 1, c));
            }
        }
    }

    skin.patches.push_back(std::move(patch));
    return skin.patches.back().patch_id;
}

SkinConfig make_ur5_like_skin() {
    SkinConfig skin;
    skin.name = "ur5_like_2112";

    // 6R chain, roughly UR5 proportions. Axes alternate so elbow/shoulder
    // folds bring distal patches toward proximal ones.
    auto joint = [](const Vec3& axis, const Vec3& offset) {
        Joint j;
        j.axis = axis.normalized();
        j.origin = translate(offset);
        return j;
    };
    skin.chain.base = RigidTransform::identity();
    skin.chain.joints.push_back(joint({0, 0, 1}, {0, 0, 0.089}));     // base yaw
    skin.chain.joints.push_back(joint({0, 1, 0}, {0, 0.136, 0}));     // shoulder
    skin.chain.joints.push_back(joint({0, 1, 0}, {0, -0.119, 0.425})); // elbow
    skin.chain.joints.push_back(joint({0, 1, 0}, {0, 0, 0.392}));     // wrist 1
    skin.chain.joints.push_back(joint({0, 0, 1}, {0, 0.093, 0}));     // wrist 2
    skin.chain.joints.push_back(joint({0, 1, 0}, {0, 0, 0.095}));     // wrist 3

    // Wrapped bands around each link segment; pitch shrinks toward the
    // end-effector (denser sensing distally). 2112 taxels total.
    const Eigen::Quaterniond xup(Eigen::AngleAxisd(M_PI / 2.0, Vec3::UnitY()));

    struct Placement {
        int link;
        RigidTransform mount;
        GridPatchSpec spec;
    };
    auto band = [](int rows, int cols, double pitch) {
        GridPatchSpec s;
        s.rows = rows;
        s.cols = cols;
        s.pitch = pitch;
        s.wrap = true;
        return s;
    };
    const std::vector<Placement> placements = {
        {0, rigid_from(Eigen::Quaterniond::Identity(), {0, 0, -0.02}), band(16, 16, 0.012)},
        {1, rigid_from(xup, {0.03, 0, 0}), band(16, 20, 0.011)},
        {1, rigid_from(xup, {0.24, 0, 0}), band(16, 20, 0.011)},
        {2, rigid_from(xup, {0.03, 0, 0}), band(16, 16, 0.010)},
        {2, rigid_from(xup, {0.22, 0, 0}), band(16, 16, 0.010)},
        {3, rigid_from(Eigen::Quaterniond::Identity(), {0, 0, -0.05}), band(12, 16, 0.008)},
        {4, rigid_from(xup, {-0.04, 0, 0}), band(12, 16, 0.008)},
        {5, rigid_from(Eigen::Quaterniond::Identity(), {0, 0, -0.06}), band(20, 16, 0.006)},
    };
    for (const Placement& p : placements) add_grid_patch(skin, p.link, p.mount, p.spec);
    return skin;
}

SkinConfig make_fold_rig_skin() {
    SkinConfig skin;
    skin.name = "fold_rig";

    // One hinge at the origin. Patch A extends along -x on link 0, patch B
    // along +x on link 1; at q=0 both sheets are coplanar (z=0, normals +z).
    // The hinge axis sits 12.5 mm above the sheets, so a q=pi fold lands B
    // parallel to A, facing it across a 25 mm gap.
    Joint fixed_root;
    fixed_root.axis = Vec3(0, 0, 1);
    fixed_root.origin = RigidTransform::identity();
    Joint hinge;
    hinge.axis = Vec3(0, -1, 0);   // positive q folds B upward over A
    hinge.origin = translate({0.0, 0.0, 0.0125});
    skin.chain.base = RigidTransform::identity();
    skin.chain.joints.push_back(fixed_root);
    skin.chain.joints.push_back(hinge);

    GridPatchSpec sheet;
    sheet.rows = 12;
    sheet.cols = 12;
    sheet.pitch = 0.010;
    sheet.wrap = false;

    // Patch A on link 0: columns run -x from just before the hinge.
    const Eigen::Quaterniond flip_x(Eigen::AngleAxisd(M_PI, Vec3::UnitZ()));
    add_grid_patch(skin, 0, rigid_from(flip_x, {-0.015, 0.055, 0.0}), sheet);
    // Patch B on link 1: columns run +x from just after the hinge; the
    // mount cancels the hinge lift so the rest pose stays coplanar.
    add_grid_patch(skin, 1, rigid_from(Eigen::Quaterniond::Identity(), {0.015, -0.055, -0.0125}),
                   sheet);
    return skin;
}

} // namespace taxelgraph
