#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcpnn/model.hpp"

namespace bcpnn {

// Binary checkpoint layout (all integers little-endian):
//   magic "BCPN" | version u32 | header counts u32[] (layer dims,
//   projection dims, progress counters) | f64 arrays in declaration order
//   (traces, bias gains) | masks as one byte per entry | RNG state u64 |
//   config echo as u32 length + UTF-8.
// Weights and biases are derived from traces and are not stored;
// save -> load -> save is byte-identical.
constexpr uint32_t kCheckpointVersion = 1;

std::vector<uint8_t> serialize_checkpoint(const Model& model);
Model parse_checkpoint(const std::vector<uint8_t>& bytes, const std::string& origin = "<bytes>");

void save_checkpoint(const Model& model, const std::string& path);
Model load_checkpoint(const std::string& path);

} // namespace bcpnn
