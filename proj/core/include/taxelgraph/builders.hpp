#ifndef TAXELGRAPH_BUILDERS_HPP
#define TAXELGRAPH_BUILDERS_HPP

#include "taxelgraph/skin.hpp"

namespace taxelgraph {

/// Options for a rectangular taxel grid. Wrapped grids close the column
/// direction into a full cylinder band around the patch-frame z axis
/// (column index sweeps the circumference, row index runs along z).
struct GridPatchSpec {
    int rows = 4;
    int cols = 4;
    double pitch = 0.010;    // taxel spacing, m
    bool wrap = false;       // cylinder band instead of flat sheet
    bool diagonals = true;   // 8-neighbor mesh instead of 4-neighbor
};

/// Appends a grid patch to the config. Flat sheets lie in the patch-frame
/// x-y plane with +z normals; wrapped bands are cylinders of radius
/// cols*pitch/(2*pi) with outward normals. Returns the new patch id.
int add_grid_patch(SkinConfig& skin, int link_index, const RigidTransform& mount,
                   const GridPatchSpec& spec);

/// Default 6R / 8-patch / 2112-taxel configuration with denser patches on
/// the distal links.
SkinConfig make_ur5_like_skin();

/// Two flat patches on either side of a single hinge joint, used for the
/// fold scenarios: folding the joint brings the sheets face to face.
SkinConfig make_fold_rig_skin();

} // namespace taxelgraph

#endif
