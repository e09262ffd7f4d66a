#ifndef SINIR_CHECKPOINT_HPP
#define SINIR_CHECKPOINT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sinir/trainer.hpp"

namespace sinir {

/// Binary model file: 8-byte magic "SINIRCKP", little-endian u32 version,
/// little-endian u32 header length, a UTF-8 JSON header (training settings,
/// scale geometry, a per-net table naming every parameter tensor and its
/// shape, the seed), then all weights as little-endian f32 in exactly the
/// header-declared order. The shape table makes the payload walkable
/// without assumptions about the architecture; saving a just-loaded model
/// reproduces the file byte for byte.
std::vector<std::uint8_t> serialize_checkpoint(const ModelCheckpoint& ckpt);
ModelCheckpoint parse_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const ModelCheckpoint& ckpt, const std::string& path);
ModelCheckpoint load_checkpoint(const std::string& path);

}  // namespace sinir

#endif
