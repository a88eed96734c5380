#ifndef TAXELGRAPH_MODEL_IO_HPP
#define TAXELGRAPH_MODEL_IO_HPP

#include <string>

#include "taxelgraph/egnn.hpp"

namespace taxelgraph {

// Checkpoint file, little-endian, magic "EGN1":
//   u32 magic | u32 version | u32 layers | u32 hidden | u32 node_in
//   u32 edge_attr | u32 readout_hidden | u32 pooling | u64 skin_hash
//   u32 n_tensors, then per tensor u32 rows, u32 cols, f64 data
// Tensor order matches param_views().

void save_model(const std::string& path, const EgnnModel& model);
EgnnModel load_model(const std::string& path);

} // namespace taxelgraph

#endif
