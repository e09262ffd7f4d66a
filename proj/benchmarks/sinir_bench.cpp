#include <benchmark/benchmark.h>

#include "sinir/loss.hpp"
#include "sinir/nn.hpp"
#include "sinir/resample.hpp"
#include "sinir/rng.hpp"

namespace {

// Deterministic content so runs are comparable across machines.
sinir::ImageTensor filled(int c, int h, int w, unsigned seed) {
    sinir::ImageTensor t(c, h, w);
    sinir::Rng rng(seed);
    for (double& v : t.values()) v = rng.uniform() * 1.8 - 0.9;
    return t;
}

void conv3x3_forward(benchmark::State& state) {
    const int width = static_cast<int>(state.range(0));
    const sinir::ImageTensor x = filled(width, 64, 64, 1);
    sinir::Conv2dParams p = sinir::make_conv(width, width, 3);
    sinir::Rng rng(2);
    for (double& w : p.weight) w = rng.uniform() - 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sinir::conv_forward(x, p));
    }
    state.SetItemsProcessed(state.iterations() * x.size());
}
BENCHMARK(conv3x3_forward)->Arg(16)->Arg(32)->Arg(64);

void conv3x3_backward(benchmark::State& state) {
    const int width = static_cast<int>(state.range(0));
    const sinir::ImageTensor x = filled(width, 64, 64, 3);
    const sinir::ImageTensor gout = filled(width, 64, 64, 4);
    sinir::Conv2dParams p = sinir::make_conv(width, width, 3);
    sinir::Rng rng(5);
    for (double& w : p.weight) w = rng.uniform() - 0.5;
    sinir::ConvCache cache;
    (void)sinir::conv_forward(x, p, &cache);
    for (auto _ : state) {
        sinir::Conv2dGrads g{std::vector<double>(p.weight.size(), 0.0),
                             std::vector<double>(p.bias.size(), 0.0)};
        benchmark::DoNotOptimize(sinir::conv_backward(gout, cache, p, g));
    }
    state.SetItemsProcessed(state.iterations() * x.size());
}
BENCHMARK(conv3x3_backward)->Arg(16)->Arg(32)->Arg(64);

void net_forward_pass(benchmark::State& state) {
    const int width = static_cast<int>(state.range(0));
    const sinir::ImageTensor x = filled(3, 64, 64, 6);
    sinir::Rng rng(7);
    const sinir::RefineNet net = sinir::net_init(width, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sinir::net_forward(x, net));
    }
}
BENCHMARK(net_forward_pass)->Arg(16)->Arg(32)->Arg(64);

void ssim_with_grad(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const sinir::ImageTensor a = filled(3, side, side, 8);
    const sinir::ImageTensor b = filled(3, side, side, 9);
    sinir::ImageTensor g(3, side, side);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sinir::ssim(a, b, &g));
    }
    state.SetItemsProcessed(state.iterations() * a.size());
}
BENCHMARK(ssim_with_grad)->Arg(33)->Arg(64)->Arg(128);

void bicubic(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const sinir::ImageTensor x = filled(3, side, side, 10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sinir::bicubic_resize(x, side * 3 / 4, side * 3 / 4, true));
    }
}
BENCHMARK(bicubic)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
