#ifndef SINIR_NN_HPP
#define SINIR_NN_HPP

#include <array>
#include <string>
#include <vector>

#include "sinir/rng.hpp"
#include "sinir/tensor.hpp"

namespace sinir {

/// Negative-side slope shared by every in-network activation.
inline constexpr double kLeakySlope = 0.2;

/// Residual blocks per network.
inline constexpr int kNumBlocks = 6;

/// Weights for one convolution. kernel_size is 1 (pointwise) or 3, where
/// the 3x3 case pads its input by one reflected pixel so spatial dims are
/// preserved. Weight layout is out_ch x in_ch x k x k, row-major.
struct Conv2dParams {
    int out_channels = 0;
    int in_channels = 0;
    int kernel_size = 0;
    std::vector<double> weight;
    std::vector<double> bias;

    double& w(int o, int i, int ky, int kx) {
        return weight[((static_cast<size_t>(o) * in_channels + i) * kernel_size + ky) *
                          kernel_size + kx];
    }
    double w(int o, int i, int ky, int kx) const {
        return weight[((static_cast<size_t>(o) * in_channels + i) * kernel_size + ky) *
                          kernel_size + kx];
    }
};

Conv2dParams make_conv(int out_channels, int in_channels, int kernel_size);

/// Per-channel affine normalization over spatial extent (biased variance).
struct InstanceNormParams {
    std::vector<double> gamma;
    std::vector<double> beta;
    double epsilon = 1e-5;
};

InstanceNormParams make_instance_norm(int channels);

/// Gradient buffers mirroring Conv2dParams / InstanceNormParams shapes.
struct Conv2dGrads {
    std::vector<double> weight;
    std::vector<double> bias;
};

struct InstanceNormGrads {
    std::vector<double> gamma;
    std::vector<double> beta;
};

/// Forward activations a convolution retains for its backward pass.
struct ConvCache {
    ImageTensor input{1, 1, 1};
    bool recorded = false;
};

struct InstanceNormCache {
    ImageTensor input{1, 1, 1};
    std::vector<double> mean;
    std::vector<double> inv_std;
    bool recorded = false;
};

/// Reflection padding by `pad` pixels on each spatial edge (interior
/// mirroring: the border pixel itself is not repeated). Requires both
/// spatial dims > pad.
ImageTensor reflect_pad(const ImageTensor& img, int pad);

/// Adjoint of reflect_pad: folds padded-border contributions back onto the
/// interior positions they mirrored.
ImageTensor reflect_pad_adjoint(const ImageTensor& grad_padded, int pad);

ImageTensor conv_forward(const ImageTensor& input, const Conv2dParams& p,
                         ConvCache* cache = nullptr);

/// Returns grad wrt the convolution input and accumulates parameter grads.
/// Throws StateError when the cache was never recorded.
ImageTensor conv_backward(const ImageTensor& grad_out, const ConvCache& cache,
                          const Conv2dParams& p, Conv2dGrads& grads);

ImageTensor instance_norm_forward(const ImageTensor& input,
                                  const InstanceNormParams& p,
                                  InstanceNormCache* cache = nullptr);

ImageTensor instance_norm_backward(const ImageTensor& grad_out,
                                   const InstanceNormCache& cache,
                                   const InstanceNormParams& p,
                                   InstanceNormGrads& grads);

ImageTensor leaky_relu(const ImageTensor& input, double slope = kLeakySlope);

/// Backward through leaky_relu; `input` is the activation's forward input.
ImageTensor leaky_relu_backward(const ImageTensor& grad_out,
                                const ImageTensor& input,
                                double slope = kLeakySlope);

ImageTensor tanh_forward(const ImageTensor& input);

/// Backward through tanh; `output` is the forward result (derivative 1-y^2).
ImageTensor tanh_backward(const ImageTensor& grad_out,
                          const ImageTensor& output);

/// Fully convolutional per-scale network: two pointwise convolutions into
/// the working width, six 3x3 conv + instance-norm + leaky-relu blocks on a
/// running sum (each block adds its output to everything accumulated so
/// far), two pointwise convolutions back to RGB, tanh. No pooling, so any
/// input size >= 2x2 maps to an output of identical shape.
struct RefineNet {
    int width = 0;
    std::array<Conv2dParams, 2> in_proj;
    struct Block {
        Conv2dParams conv;
        InstanceNormParams norm;
    };
    std::vector<Block> blocks;
    std::array<Conv2dParams, 2> out_proj;
};

/// Gradients for every RefineNet parameter, zero-initialized.
struct RefineNetGrads {
    std::array<Conv2dGrads, 2> in_proj;
    struct BlockGrads {
        Conv2dGrads conv;
        InstanceNormGrads norm;
    };
    std::vector<BlockGrads> blocks;
    std::array<Conv2dGrads, 2> out_proj;
};

/// Forward activations for one whole-net pass.
struct NetTape {
    std::array<ConvCache, 2> in_proj;
    struct BlockTape {
        ConvCache conv;
        InstanceNormCache norm;
        ImageTensor pre_act{1, 1, 1};
    };
    std::vector<BlockTape> blocks;
    std::array<ConvCache, 2> out_proj;
    ImageTensor output{1, 1, 1};
    bool recorded = false;
};

/// Zero-weight network skeleton with the right tensor shapes (norm gains
/// start at one). Checkpoint loading fills one of these.
RefineNet make_net(int width);

/// Fresh network: conv weights ~ N(0, 0.02^2) drawn in a fixed order,
/// biases zero, norm gains one, and the final projection fully zero so an
/// untrained net maps every input to the zero image.
RefineNet net_init(int width, Rng& rng);

RefineNetGrads make_net_grads(const RefineNet& net);

ImageTensor net_forward(const ImageTensor& input, const RefineNet& net,
                        NetTape* tape = nullptr);

/// Backprop through the whole net. Returns grad wrt the net input.
ImageTensor net_backward(const ImageTensor& grad_out, const RefineNet& net,
                         const NetTape& tape, RefineNetGrads& grads);

/// One named parameter tensor; table order is the canonical serialization
/// order (in_proj pair, blocks in sequence, out_proj pair; weight before
/// bias, gamma before beta).
struct ParamRef {
    std::string name;
    std::vector<double>* values = nullptr;
    std::vector<int> shape;
};

struct ConstParamRef {
    std::string name;
    const std::vector<double>* values = nullptr;
    std::vector<int> shape;
};

std::vector<ParamRef> parameter_table(RefineNet& net);
std::vector<ConstParamRef> parameter_table(const RefineNet& net);

/// Gradient vectors aligned index-for-index with parameter_table().
std::vector<const std::vector<double>*> gradient_table(
    const RefineNetGrads& grads);

}  // namespace sinir

#endif
