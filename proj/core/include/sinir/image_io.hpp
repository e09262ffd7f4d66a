#ifndef SINIR_IMAGE_IO_HPP
#define SINIR_IMAGE_IO_HPP

#include <string>

#include "sinir/tensor.hpp"

namespace sinir {

/// Decode a PNG into a 3xHxW tensor with values mapped linearly onto
/// [-1, 1]. Grayscale and palette images are expanded to RGB; 16-bit
/// samples keep their full precision. An alpha channel is dropped with a
/// warning on stderr. Decode problems raise FormatError; unreadable paths
/// raise IoError.
ImageTensor load_png(const std::string& path);

/// Decode a PNG into a single-channel mask in [0, 1] via the Rec. 601 luma
/// weights (0.299, 0.587, 0.114).
ImageTensor load_png_mask(const std::string& path);

/// Encode a 3xHxW tensor as an 8-bit RGB PNG, clamping to [-1, 1] first.
/// The clamp-round-encode path is the exact inverse of load_png for images
/// that came from 8-bit sources.
void save_png(const ImageTensor& img, const std::string& path);

}  // namespace sinir

#endif
