#include "sinir/optim.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "sinir/errors.hpp"

namespace sinir {

AdamState make_adam_state(const std::vector<size_t>& param_sizes,
                          const AdamConfig& config) {
    AdamState s;
    s.config = config;
    s.moments.resize(param_sizes.size());
    for (size_t i = 0; i < param_sizes.size(); ++i) {
        s.moments[i].m.assign(param_sizes[i], 0.0);
        s.moments[i].v.assign(param_sizes[i], 0.0);
    }
    return s;
}

void adam_step(const std::vector<std::vector<double>*>& params,
               const std::vector<const std::vector<double>*>& grads,
               AdamState& state) {
    if (params.size() != grads.size() ||
        params.size() != state.moments.size()) {
        throw ShapeError("adam_step: params, grads and state must align");
    }
    state.step_count += 1;
    const AdamConfig& c = state.config;
    const double bc1 = 1.0 - std::pow(c.beta1, state.step_count);
    const double bc2 = 1.0 - std::pow(c.beta2, state.step_count);
    for (size_t g = 0; g < params.size(); ++g) {
        std::vector<double>& p = *params[g];
        const std::vector<double>& gr = *grads[g];
        AdamState::Moments& mo = state.moments[g];
        if (p.size() != gr.size() || p.size() != mo.m.size()) {
            throw ShapeError("adam_step: group " + std::to_string(g) +
                             " sizes disagree");
        }
        for (size_t i = 0; i < p.size(); ++i) {
            mo.m[i] = c.beta1 * mo.m[i] + (1.0 - c.beta1) * gr[i];
            mo.v[i] = c.beta2 * mo.v[i] + (1.0 - c.beta2) * gr[i] * gr[i];
            const double mhat = mo.m[i] / bc1;
            const double vhat = mo.v[i] / bc2;
            p[i] -= c.lr * mhat / (std::sqrt(vhat) + c.epsilon);
        }
    }
}

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, sizeof v);
    put_u64(out, v);
}

struct ByteReader {
    const std::vector<std::uint8_t>& bytes;
    size_t pos = 0;
    std::uint64_t u64() {
        if (pos + 8 > bytes.size()) {
            throw FormatError("adam state: truncated");
        }
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
        }
        pos += 8;
        return v;
    }
    double f64() {
        const std::uint64_t v = u64();
        double d;
        std::memcpy(&d, &v, sizeof d);
        return d;
    }
};

}  // namespace

std::vector<std::uint8_t> serialize_adam_state(const AdamState& state) {
    std::vector<std::uint8_t> out;
    put_f64(out, state.config.lr);
    put_f64(out, state.config.beta1);
    put_f64(out, state.config.beta2);
    put_f64(out, state.config.epsilon);
    put_u64(out, static_cast<std::uint64_t>(state.step_count));
    put_u64(out, state.moments.size());
    for (const auto& mo : state.moments) {
        put_u64(out, mo.m.size());
        for (double d : mo.m) put_f64(out, d);
        for (double d : mo.v) put_f64(out, d);
    }
    return out;
}

AdamState parse_adam_state(const std::vector<std::uint8_t>& bytes) {
    ByteReader r{bytes};
    AdamState s;
    s.config.lr = r.f64();
    s.config.beta1 = r.f64();
    s.config.beta2 = r.f64();
    s.config.epsilon = r.f64();
    s.step_count = static_cast<std::int64_t>(r.u64());
    const std::uint64_t groups = r.u64();
    s.moments.resize(groups);
    for (auto& mo : s.moments) {
        const std::uint64_t n = r.u64();
        mo.m.resize(n);
        mo.v.resize(n);
        for (auto& d : mo.m) d = r.f64();
        for (auto& d : mo.v) d = r.f64();
    }
    if (r.pos != bytes.size()) {
        throw FormatError("adam state: trailing bytes");
    }
    return s;
}

}  // namespace sinir
