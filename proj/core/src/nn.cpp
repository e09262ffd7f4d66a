#include "sinir/nn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sinir/errors.hpp"
#include "sinir/parallel.hpp"

namespace sinir {

namespace {

void require_recorded(bool recorded, const char* what) {
    if (!recorded) {
        throw StateError(std::string(what) +
                         ": backward called without a recorded forward pass");
    }
}

void ensure_grad_buffer(std::vector<double>& grad, size_t want,
                        const char* what) {
    if (grad.empty()) {
        grad.assign(want, 0.0);
    } else if (grad.size() != want) {
        throw ShapeError(std::string(what) + ": gradient buffer holds " +
                         std::to_string(grad.size()) + " values, expected " +
                         std::to_string(want));
    }
}

}  // namespace

Conv2dParams make_conv(int out_channels, int in_channels, int kernel_size) {
    if (kernel_size != 1 && kernel_size != 3) {
        throw ParameterError("make_conv: kernel size must be 1 or 3");
    }
    Conv2dParams p;
    p.out_channels = out_channels;
    p.in_channels = in_channels;
    p.kernel_size = kernel_size;
    p.weight.assign(static_cast<size_t>(out_channels) * in_channels *
                        kernel_size * kernel_size,
                    0.0);
    p.bias.assign(out_channels, 0.0);
    return p;
}

InstanceNormParams make_instance_norm(int channels) {
    InstanceNormParams p;
    p.gamma.assign(channels, 1.0);
    p.beta.assign(channels, 0.0);
    return p;
}

ImageTensor reflect_pad(const ImageTensor& img, int pad) {
    const int h = img.height(), w = img.width(), c_n = img.channels();
    if (h <= pad || w <= pad) {
        throw DimensionError("reflect_pad: image " + img.shape_string() +
                             " too small for pad " + std::to_string(pad));
    }
    ImageTensor out(c_n, h + 2 * pad, w + 2 * pad);
    auto mirror = [pad](int i, int n) {
        i -= pad;
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
        return i;
    };
    for (int c = 0; c < c_n; ++c) {
        for (int y = 0; y < h + 2 * pad; ++y) {
            const int sy = mirror(y, h);
            for (int x = 0; x < w + 2 * pad; ++x) {
                out.at(c, y, x) = img.at(c, sy, mirror(x, w));
            }
        }
    }
    return out;
}

ImageTensor reflect_pad_adjoint(const ImageTensor& grad_padded, int pad) {
    const int ph = grad_padded.height(), pw = grad_padded.width();
    const int h = ph - 2 * pad, w = pw - 2 * pad;
    if (h <= pad || w <= pad) {
        throw DimensionError("reflect_pad_adjoint: padded image " +
                             grad_padded.shape_string() + " too small");
    }
    ImageTensor out(grad_padded.channels(), h, w);
    auto mirror = [pad](int i, int n) {
        i -= pad;
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
        return i;
    };
    for (int c = 0; c < grad_padded.channels(); ++c) {
        for (int y = 0; y < ph; ++y) {
            const int sy = mirror(y, h);
            for (int x = 0; x < pw; ++x) {
                out.at(c, sy, mirror(x, w)) += grad_padded.at(c, y, x);
            }
        }
    }
    return out;
}

ImageTensor conv_forward(const ImageTensor& input, const Conv2dParams& p,
                         ConvCache* cache) {
    if (input.channels() != p.in_channels) {
        throw ShapeError("conv_forward: input has " +
                         std::to_string(input.channels()) +
                         " channels, weights expect " +
                         std::to_string(p.in_channels));
    }
    const int h = input.height(), w = input.width();
    const int k = p.kernel_size;
    if (cache) {
        cache->input = input;
        cache->recorded = true;
    }

    ImageTensor out(p.out_channels, h, w);
    if (k == 1) {
        parallel_for(p.out_channels, [&](int64_t oi) {
            const int o = static_cast<int>(oi);
            double* orow = out.data() + static_cast<size_t>(o) * h * w;
            std::fill(orow, orow + static_cast<size_t>(h) * w, p.bias[o]);
            for (int i = 0; i < p.in_channels; ++i) {
                const double wv = p.w(o, i, 0, 0);
                const double* irow =
                    input.data() + static_cast<size_t>(i) * h * w;
                for (size_t n = 0; n < static_cast<size_t>(h) * w; ++n) {
                    orow[n] += wv * irow[n];
                }
            }
        });
        return out;
    }

    const ImageTensor padded = reflect_pad(input, 1);
    const int pw = w + 2;
    parallel_for(p.out_channels, [&](int64_t oi) {
        const int o = static_cast<int>(oi);
        double* obase = out.data() + static_cast<size_t>(o) * h * w;
        std::fill(obase, obase + static_cast<size_t>(h) * w, p.bias[o]);
        for (int i = 0; i < p.in_channels; ++i) {
            const double* pbase =
                padded.data() + static_cast<size_t>(i) * (h + 2) * pw;
            for (int ky = 0; ky < 3; ++ky) {
                for (int kx = 0; kx < 3; ++kx) {
                    const double wv = p.w(o, i, ky, kx);
                    for (int y = 0; y < h; ++y) {
                        const double* prow = pbase + (y + ky) * pw + kx;
                        double* orow = obase + static_cast<size_t>(y) * w;
                        for (int x = 0; x < w; ++x) {
                            orow[x] += wv * prow[x];
                        }
                    }
                }
            }
        }
    });
    return out;
}

ImageTensor conv_backward(const ImageTensor& grad_out, const ConvCache& cache,
                          const Conv2dParams& p, Conv2dGrads& grads) {
    require_recorded(cache.recorded, "conv_backward");
    const ImageTensor& input = cache.input;
    if (grad_out.channels() != p.out_channels ||
        grad_out.height() != input.height() ||
        grad_out.width() != input.width()) {
        throw ShapeError("conv_backward: grad " + grad_out.shape_string() +
                         " does not match forward output shape");
    }
    const int h = input.height(), w = input.width();
    const size_t plane = static_cast<size_t>(h) * w;
    const int k = p.kernel_size;
    ensure_grad_buffer(grads.weight, p.weight.size(), "conv_backward weight");
    ensure_grad_buffer(grads.bias, p.bias.size(), "conv_backward bias");

    if (k == 1) {
        parallel_for(p.out_channels, [&](int64_t oi) {
            const int o = static_cast<int>(oi);
            const double* grow = grad_out.data() + o * plane;
            double bsum = 0.0;
            for (size_t n = 0; n < plane; ++n) bsum += grow[n];
            grads.bias[o] += bsum;
            for (int i = 0; i < p.in_channels; ++i) {
                const double* irow = input.data() + i * plane;
                double wsum = 0.0;
                for (size_t n = 0; n < plane; ++n) wsum += grow[n] * irow[n];
                grads.weight[static_cast<size_t>(o) * p.in_channels + i] += wsum;
            }
        });
        ImageTensor grad_in(p.in_channels, h, w);
        parallel_for(p.in_channels, [&](int64_t ii) {
            const int i = static_cast<int>(ii);
            double* irow = grad_in.data() + i * plane;
            for (int o = 0; o < p.out_channels; ++o) {
                const double wv = p.w(o, i, 0, 0);
                const double* grow = grad_out.data() + o * plane;
                for (size_t n = 0; n < plane; ++n) irow[n] += wv * grow[n];
            }
        });
        return grad_in;
    }

    const ImageTensor padded = reflect_pad(input, 1);
    const int pw = w + 2;
    const size_t pplane = static_cast<size_t>(h + 2) * pw;
    parallel_for(p.out_channels, [&](int64_t oi) {
        const int o = static_cast<int>(oi);
        const double* gbase = grad_out.data() + o * plane;
        double bsum = 0.0;
        for (size_t n = 0; n < plane; ++n) bsum += gbase[n];
        grads.bias[o] += bsum;
        for (int i = 0; i < p.in_channels; ++i) {
            const double* pbase = padded.data() + i * pplane;
            for (int ky = 0; ky < 3; ++ky) {
                for (int kx = 0; kx < 3; ++kx) {
                    double wsum = 0.0;
                    for (int y = 0; y < h; ++y) {
                        const double* prow = pbase + (y + ky) * pw + kx;
                        const double* grow = gbase + static_cast<size_t>(y) * w;
                        for (int x = 0; x < w; ++x) {
                            wsum += grow[x] * prow[x];
                        }
                    }
                    grads.weight[((static_cast<size_t>(o) * p.in_channels + i) * 3 +
                                  ky) * 3 + kx] += wsum;
                }
            }
        }
    });

    // Scatter into the padded gradient, then fold the reflected border back.
    ImageTensor grad_padded(p.in_channels, h + 2, pw);
    parallel_for(p.in_channels, [&](int64_t ii) {
        const int i = static_cast<int>(ii);
        double* pbase = grad_padded.data() + i * pplane;
        for (int o = 0; o < p.out_channels; ++o) {
            const double* gbase = grad_out.data() + o * plane;
            for (int ky = 0; ky < 3; ++ky) {
                for (int kx = 0; kx < 3; ++kx) {
                    const double wv = p.w(o, i, ky, kx);
                    for (int y = 0; y < h; ++y) {
                        double* prow = pbase + (y + ky) * pw + kx;
                        const double* grow = gbase + static_cast<size_t>(y) * w;
                        for (int x = 0; x < w; ++x) {
                            prow[x] += wv * grow[x];
                        }
                    }
                }
            }
        }
    });
    return reflect_pad_adjoint(grad_padded, 1);
}

ImageTensor instance_norm_forward(const ImageTensor& input,
                                  const InstanceNormParams& p,
                                  InstanceNormCache* cache) {
    const int c_n = input.channels();
    if (static_cast<size_t>(c_n) != p.gamma.size()) {
        throw ShapeError("instance_norm_forward: input has " +
                         std::to_string(c_n) + " channels, params expect " +
                         std::to_string(p.gamma.size()));
    }
    const size_t plane = static_cast<size_t>(input.height()) * input.width();
    ImageTensor out(c_n, input.height(), input.width());
    std::vector<double> means(c_n), inv_stds(c_n);
    parallel_for(c_n, [&](int64_t ci) {
        const int c = static_cast<int>(ci);
        const double* irow = input.data() + c * plane;
        double sum = 0.0;
        for (size_t n = 0; n < plane; ++n) sum += irow[n];
        const double mean = sum / static_cast<double>(plane);
        double var = 0.0;
        for (size_t n = 0; n < plane; ++n) {
            const double d = irow[n] - mean;
            var += d * d;
        }
        var /= static_cast<double>(plane);
        const double inv_std = 1.0 / std::sqrt(var + p.epsilon);
        means[c] = mean;
        inv_stds[c] = inv_std;
        const double g = p.gamma[c], b = p.beta[c];
        double* orow = out.data() + c * plane;
        for (size_t n = 0; n < plane; ++n) {
            orow[n] = g * (irow[n] - mean) * inv_std + b;
        }
    });
    if (cache) {
        cache->input = input;
        cache->mean = std::move(means);
        cache->inv_std = std::move(inv_stds);
        cache->recorded = true;
    }
    return out;
}

ImageTensor instance_norm_backward(const ImageTensor& grad_out,
                                   const InstanceNormCache& cache,
                                   const InstanceNormParams& p,
                                   InstanceNormGrads& grads) {
    require_recorded(cache.recorded, "instance_norm_backward");
    const ImageTensor& input = cache.input;
    if (!grad_out.same_shape(input)) {
        throw ShapeError("instance_norm_backward: grad " +
                         grad_out.shape_string() + " does not match input " +
                         input.shape_string());
    }
    const int c_n = input.channels();
    const size_t plane = static_cast<size_t>(input.height()) * input.width();
    ensure_grad_buffer(grads.gamma, p.gamma.size(), "instance_norm gamma");
    ensure_grad_buffer(grads.beta, p.beta.size(), "instance_norm beta");

    ImageTensor grad_in(c_n, input.height(), input.width());
    parallel_for(c_n, [&](int64_t ci) {
        const int c = static_cast<int>(ci);
        const double* irow = input.data() + c * plane;
        const double* grow = grad_out.data() + c * plane;
        const double mean = cache.mean[c], istd = cache.inv_std[c];
        double gsum = 0.0, gxhat = 0.0;
        for (size_t n = 0; n < plane; ++n) {
            const double xhat = (irow[n] - mean) * istd;
            gsum += grow[n];
            gxhat += grow[n] * xhat;
        }
        grads.beta[c] += gsum;
        grads.gamma[c] += gxhat;
        const double inv_n = 1.0 / static_cast<double>(plane);
        const double coef = p.gamma[c] * istd;
        double* orow = grad_in.data() + c * plane;
        for (size_t n = 0; n < plane; ++n) {
            const double xhat = (irow[n] - mean) * istd;
            orow[n] = coef * (grow[n] - inv_n * gsum - xhat * inv_n * gxhat);
        }
    });
    return grad_in;
}

ImageTensor leaky_relu(const ImageTensor& input, double slope) {
    ImageTensor out(input.channels(), input.height(), input.width());
    const double* in = input.data();
    double* o = out.data();
    const size_t n = input.size();
    for (size_t i = 0; i < n; ++i) {
        o[i] = in[i] >= 0.0 ? in[i] : slope * in[i];
    }
    return out;
}

ImageTensor leaky_relu_backward(const ImageTensor& grad_out,
                                const ImageTensor& input, double slope) {
    require_same_shape(grad_out, input, "leaky_relu_backward");
    ImageTensor out(input.channels(), input.height(), input.width());
    const double* in = input.data();
    const double* g = grad_out.data();
    double* o = out.data();
    const size_t n = input.size();
    for (size_t i = 0; i < n; ++i) {
        o[i] = in[i] >= 0.0 ? g[i] : slope * g[i];
    }
    return out;
}

ImageTensor tanh_forward(const ImageTensor& input) {
    ImageTensor out(input.channels(), input.height(), input.width());
    const double* in = input.data();
    double* o = out.data();
    const size_t n = input.size();
    for (size_t i = 0; i < n; ++i) o[i] = std::tanh(in[i]);
    return out;
}

ImageTensor tanh_backward(const ImageTensor& grad_out,
                          const ImageTensor& output) {
    require_same_shape(grad_out, output, "tanh_backward");
    ImageTensor out(output.channels(), output.height(), output.width());
    const double* y = output.data();
    const double* g = grad_out.data();
    double* o = out.data();
    const size_t n = output.size();
    for (size_t i = 0; i < n; ++i) o[i] = g[i] * (1.0 - y[i] * y[i]);
    return out;
}

RefineNet make_net(int width) {
    if (width < 1) {
        throw ParameterError("make_net: width must be at least 1");
    }
    RefineNet net;
    net.width = width;
    net.in_proj[0] = make_conv(width, 3, 1);
    net.in_proj[1] = make_conv(width, width, 1);
    net.blocks.resize(kNumBlocks);
    for (auto& b : net.blocks) {
        b.conv = make_conv(width, width, 3);
        b.norm = make_instance_norm(width);
    }
    net.out_proj[0] = make_conv(width, width, 1);
    net.out_proj[1] = make_conv(3, width, 1);
    return net;
}

RefineNet net_init(int width, Rng& rng) {
    RefineNet net = make_net(width);

    // Weight draw order is fixed (input pair, blocks in sequence, first
    // output projection); the final projection stays all-zero so a fresh
    // net is the zero map.
    auto fill_normal = [&](Conv2dParams& c) {
        for (double& v : c.weight) v = 0.02 * rng.normal();
    };
    fill_normal(net.in_proj[0]);
    fill_normal(net.in_proj[1]);
    for (auto& b : net.blocks) fill_normal(b.conv);
    fill_normal(net.out_proj[0]);
    return net;
}

RefineNetGrads make_net_grads(const RefineNet& net) {
    RefineNetGrads g;
    auto conv_zeros = [](const Conv2dParams& c) {
        Conv2dGrads cg;
        cg.weight.assign(c.weight.size(), 0.0);
        cg.bias.assign(c.bias.size(), 0.0);
        return cg;
    };
    g.in_proj = {conv_zeros(net.in_proj[0]), conv_zeros(net.in_proj[1])};
    g.blocks.resize(net.blocks.size());
    for (size_t i = 0; i < net.blocks.size(); ++i) {
        g.blocks[i].conv = conv_zeros(net.blocks[i].conv);
        g.blocks[i].norm.gamma.assign(net.blocks[i].norm.gamma.size(), 0.0);
        g.blocks[i].norm.beta.assign(net.blocks[i].norm.beta.size(), 0.0);
    }
    g.out_proj = {conv_zeros(net.out_proj[0]), conv_zeros(net.out_proj[1])};
    return g;
}

ImageTensor net_forward(const ImageTensor& input, const RefineNet& net,
                        NetTape* tape) {
    if (input.height() < 2 || input.width() < 2) {
        throw DimensionError("net_forward: input " + input.shape_string() +
                             " must be at least 2x2");
    }
    if (tape) {
        tape->blocks.resize(net.blocks.size());
        tape->recorded = true;
    }
    ImageTensor h = conv_forward(input, net.in_proj[0],
                                 tape ? &tape->in_proj[0] : nullptr);
    ImageTensor acc = conv_forward(h, net.in_proj[1],
                                   tape ? &tape->in_proj[1] : nullptr);
    for (size_t b = 0; b < net.blocks.size(); ++b) {
        NetTape::BlockTape* bt = tape ? &tape->blocks[b] : nullptr;
        ImageTensor z = conv_forward(acc, net.blocks[b].conv,
                                     bt ? &bt->conv : nullptr);
        ImageTensor nrm = instance_norm_forward(z, net.blocks[b].norm,
                                                bt ? &bt->norm : nullptr);
        if (bt) bt->pre_act = nrm;
        acc = add(acc, leaky_relu(nrm));
    }
    ImageTensor f = conv_forward(acc, net.out_proj[0],
                                 tape ? &tape->out_proj[0] : nullptr);
    f = conv_forward(f, net.out_proj[1], tape ? &tape->out_proj[1] : nullptr);
    ImageTensor y = tanh_forward(f);
    if (tape) tape->output = y;
    return y;
}

ImageTensor net_backward(const ImageTensor& grad_out, const RefineNet& net,
                         const NetTape& tape, RefineNetGrads& grads) {
    require_recorded(tape.recorded, "net_backward");
    if (grads.blocks.size() != net.blocks.size()) {
        throw ShapeError("net_backward: gradient buffers do not match net");
    }
    ImageTensor g = tanh_backward(grad_out, tape.output);
    g = conv_backward(g, tape.out_proj[1], net.out_proj[1], grads.out_proj[1]);
    g = conv_backward(g, tape.out_proj[0], net.out_proj[0], grads.out_proj[0]);
    for (int b = static_cast<int>(net.blocks.size()) - 1; b >= 0; --b) {
        // The skip path carries g through unchanged; the block path routes
        // it back through activation, norm and conv.
        ImageTensor gb = leaky_relu_backward(g, tape.blocks[b].pre_act);
        gb = instance_norm_backward(gb, tape.blocks[b].norm,
                                    net.blocks[b].norm, grads.blocks[b].norm);
        gb = conv_backward(gb, tape.blocks[b].conv, net.blocks[b].conv,
                           grads.blocks[b].conv);
        g = add(g, gb);
    }
    g = conv_backward(g, tape.in_proj[1], net.in_proj[1], grads.in_proj[1]);
    g = conv_backward(g, tape.in_proj[0], net.in_proj[0], grads.in_proj[0]);
    return g;
}

namespace {

// Visits every parameter tensor in the canonical order with its name and
// shape; shared by the mutable and const table builders.
template <typename Net, typename Fn>
void walk_params(Net& net, Fn&& fn) {
    auto conv = [&fn](const std::string& prefix, auto& c) {
        fn(prefix + ".weight", c.weight,
           std::vector<int>{c.out_channels, c.in_channels, c.kernel_size,
                            c.kernel_size});
        fn(prefix + ".bias", c.bias, std::vector<int>{c.out_channels});
    };
    conv("in_proj.0", net.in_proj[0]);
    conv("in_proj.1", net.in_proj[1]);
    for (size_t b = 0; b < net.blocks.size(); ++b) {
        const std::string prefix = "block." + std::to_string(b);
        conv(prefix + ".conv", net.blocks[b].conv);
        fn(prefix + ".norm.gamma", net.blocks[b].norm.gamma,
           std::vector<int>{static_cast<int>(net.blocks[b].norm.gamma.size())});
        fn(prefix + ".norm.beta", net.blocks[b].norm.beta,
           std::vector<int>{static_cast<int>(net.blocks[b].norm.beta.size())});
    }
    conv("out_proj.0", net.out_proj[0]);
    conv("out_proj.1", net.out_proj[1]);
}

}  // namespace

std::vector<ParamRef> parameter_table(RefineNet& net) {
    std::vector<ParamRef> refs;
    walk_params(net, [&refs](const std::string& name, std::vector<double>& v,
                             std::vector<int> shape) {
        refs.push_back({name, &v, std::move(shape)});
    });
    return refs;
}

std::vector<ConstParamRef> parameter_table(const RefineNet& net) {
    std::vector<ConstParamRef> refs;
    walk_params(net, [&refs](const std::string& name,
                             const std::vector<double>& v,
                             std::vector<int> shape) {
        refs.push_back({name, &v, std::move(shape)});
    });
    return refs;
}

std::vector<const std::vector<double>*> gradient_table(
    const RefineNetGrads& grads) {
    std::vector<const std::vector<double>*> refs;
    auto push_conv = [&refs](const Conv2dGrads& c) {
        refs.push_back(&c.weight);
        refs.push_back(&c.bias);
    };
    push_conv(grads.in_proj[0]);
    push_conv(grads.in_proj[1]);
    for (const auto& b : grads.blocks) {
        push_conv(b.conv);
        refs.push_back(&b.norm.gamma);
        refs.push_back(&b.norm.beta);
    }
    push_conv(grads.out_proj[0]);
    push_conv(grads.out_proj[1]);
    return refs;
}

}  // namespace sinir
