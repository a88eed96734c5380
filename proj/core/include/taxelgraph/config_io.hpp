#ifndef TAXELGRAPH_CONFIG_IO_HPP
#define TAXELGRAPH_CONFIG_IO_HPP

#include <string>

#include "taxelgraph/skin.hpp"

namespace taxelgraph {

// Skin configuration file schema (schema_version 1), JSON:
//
// {
//   "schema_version": 1,
//   "name": "...",
//   "chain": {
//     "base_transform": {"rotation": [w,x,y,z], "translation": [x,y,z]},
//     "joints": [{"axis": [x,y,z], "origin": {...transform...}}, ...]
//   },
//   "patches": [{
//     "patch_id": 0, "link_index": 0, "mount_transform": {...transform...},
//     "taxels": [{"id": 0, "position": [..], "normal": [..], "area": 1e-4}, ...],
//     "adjacency": [[a, b, rest_length], ...]
//   }, ...]
// }
//
// Taxel ids are global and dense; each taxel appears under exactly one patch.

std::string skin_to_json(const SkinConfig& skin);
SkinConfig skin_from_json(const std::string& text);

SkinConfig load_skin_config(const std::string& path);
void save_skin_config(const SkinConfig& skin, const std::string& path);

} // namespace taxelgraph

#endif
