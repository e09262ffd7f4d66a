#include "sinir/tensor.hpp"

#include <string>

namespace sinir {

std::string ImageTensor::shape_string(int c, int h, int w) {
    return "(" + std::to_string(c) + "x" + std::to_string(h) + "x" +
           std::to_string(w) + ")";
}

void require_same_shape(const ImageTensor& a, const ImageTensor& b, const char* what) {
    if (!a.same_shape(b))
        throw ShapeError(std::string(what) + ": shape mismatch " + a.shape_string() +
                         " vs " + b.shape_string());
}

ImageTensor elementwise(const ImageTensor& a, const ImageTensor& b, ElementwiseOp op) {
    require_same_shape(a, b, "elementwise");
    ImageTensor out(a.channels(), a.height(), a.width());
    const double* pa = a.data();
    const double* pb = b.data();
    double* po = out.data();
    const std::size_t n = a.size();
    switch (op) {
        case ElementwiseOp::add:
            for (std::size_t i = 0; i < n; ++i) po[i] = pa[i] + pb[i];
            break;
        case ElementwiseOp::sub:
            for (std::size_t i = 0; i < n; ++i) po[i] = pa[i] - pb[i];
            break;
        case ElementwiseOp::mul:
            for (std::size_t i = 0; i < n; ++i) po[i] = pa[i] * pb[i];
            break;
    }
    return out;
}

ImageTensor add(const ImageTensor& a, const ImageTensor& b) {
    return elementwise(a, b, ElementwiseOp::add);
}

ImageTensor sub(const ImageTensor& a, const ImageTensor& b) {
    return elementwise(a, b, ElementwiseOp::sub);
}

ImageTensor mul(const ImageTensor& a, const ImageTensor& b) {
    return elementwise(a, b, ElementwiseOp::mul);
}

}  // namespace sinir
