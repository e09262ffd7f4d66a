#ifndef SINIR_TENSOR_HPP
#define SINIR_TENSOR_HPP

#include <cstddef>
#include <vector>

#include "sinir/errors.hpp"

namespace sinir {

/// Dense real-valued raster, row-major C x H x W, double precision.
///
/// Image-valued tensors live in [-1, 1]; intermediate feature maps are
/// unbounded. The layout is fixed so every kernel in this library can index
/// with plain arithmetic.
class ImageTensor {
public:
    ImageTensor() = default;

    ImageTensor(int channels, int height, int width, double fill = 0.0)
        : channels_(channels), height_(height), width_(width) {
        if (channels < 1 || height < 1 || width < 1)
            throw DimensionError("tensor dimensions must be >= 1, got " +
                                 shape_string(channels, height, width));
        data_.assign(static_cast<std::size_t>(channels) * height * width, fill);
    }

    int channels() const { return channels_; }
    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& at(int c, int y, int x) {
        return data_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
    }
    double at(int c, int y, int x) const {
        return data_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    bool same_shape(const ImageTensor& other) const {
        return channels_ == other.channels_ && height_ == other.height_ &&
               width_ == other.width_;
    }

    std::string shape_string() const {
        return shape_string(channels_, height_, width_);
    }

    static std::string shape_string(int c, int h, int w);

private:
    int channels_ = 0;
    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

enum class ElementwiseOp { add, sub, mul };

/// Pointwise combination of two same-shaped tensors.
ImageTensor elementwise(const ImageTensor& a, const ImageTensor& b, ElementwiseOp op);

ImageTensor add(const ImageTensor& a, const ImageTensor& b);
ImageTensor sub(const ImageTensor& a, const ImageTensor& b);
ImageTensor mul(const ImageTensor& a, const ImageTensor& b);

/// Throws ShapeError unless a and b agree in all three dims.
void require_same_shape(const ImageTensor& a, const ImageTensor& b, const char* what);

}  // namespace sinir

#endif
