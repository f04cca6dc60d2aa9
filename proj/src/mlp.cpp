#include "edgetwin/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "edgetwin/error.hpp"
#include "edgetwin/rng.hpp"

namespace edgetwin {

namespace {

// activations per layer for one input, kept for the backward pass
struct ForwardCache {
    std::vector<std::vector<double>> inputs;  // input to each layer
    std::vector<double> output;
};

void layer_forward(const Mlp::Layer& l, std::span<const double> x,
                   std::vector<double>& out, bool relu) {
    out.assign(static_cast<std::size_t>(l.out), 0.0);
    for (int o = 0; o < l.out; ++o) {
        double acc = l.bias[static_cast<std::size_t>(o)];
        const double* w = &l.weights[static_cast<std::size_t>(o) * l.in];
        for (int i = 0; i < l.in; ++i) acc += w[i] * x[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(o)] = relu ? std::max(0.0, acc) : acc;
    }
}

ForwardCache forward_cached(const std::vector<Mlp::Layer>& layers,
                            std::span<const double> input) {
    ForwardCache cache;
    std::vector<double> x(input.begin(), input.end());
    for (std::size_t li = 0; li < layers.size(); ++li) {
        cache.inputs.push_back(x);
        std::vector<double> y;
        layer_forward(layers[li], x, y, li + 1 < layers.size());
        x = std::move(y);
    }
    cache.output = x;
    return cache;
}

}  // namespace

Mlp::Mlp(const std::vector<int>& layer_sizes, std::uint64_t seed) {
    if (layer_sizes.size() < 2)
        throw ValidationError("mlp: need at least input and output sizes");
    for (int s : layer_sizes)
        if (s <= 0) throw ValidationError("mlp: layer sizes must be > 0");
    Rng rng(seed);
    for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i) {
        Layer l;
        l.in = layer_sizes[i];
        l.out = layer_sizes[i + 1];
        const double bound = std::sqrt(6.0 / l.in);
        l.weights.resize(static_cast<std::size_t>(l.in) * l.out);
        for (auto& w : l.weights) w = rng.uniform(-bound, bound);
        l.bias.assign(static_cast<std::size_t>(l.out), 0.0);
        layers_.push_back(std::move(l));
    }
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
    if (layers_.empty()) throw ContractError("mlp: forward on empty network");
    if (static_cast<int>(input.size()) != input_dim())
        throw ContractError("mlp: input length " + std::to_string(input.size()) +
                            " does not match input dim " + std::to_string(input_dim()));
    std::vector<double> x(input.begin(), input.end());
    std::vector<double> y;
    for (std::size_t li = 0; li < layers_.size(); ++li) {
        layer_forward(layers_[li], x, y, li + 1 < layers_.size());
        std::swap(x, y);
    }
    return x;
}

Mlp::Gradients Mlp::zero_gradients() const {
    Gradients g;
    for (const auto& l : layers_) {
        Layer zl;
        zl.in = l.in;
        zl.out = l.out;
        zl.weights.assign(l.weights.size(), 0.0);
        zl.bias.assign(l.bias.size(), 0.0);
        g.layers.push_back(std::move(zl));
    }
    return g;
}

double Mlp::td_backward(const std::vector<std::vector<double>>& states,
                        const std::vector<int>& actions,
                        const std::vector<double>& targets,
                        Gradients& grads) const {
    const std::size_t batch = states.size();
    if (batch == 0 || actions.size() != batch || targets.size() != batch)
        throw ContractError("td_backward: inconsistent batch");
    if (grads.layers.size() != layers_.size()) grads = zero_gradients();

    double loss = 0.0;
    for (std::size_t n = 0; n < batch; ++n) {
        const ForwardCache cache = forward_cached(layers_, states[n]);
        const int a = actions[n];
        if (a < 0 || a >= output_dim())
            throw ContractError("td_backward: action out of range");
        const double err = cache.output[static_cast<std::size_t>(a)] - targets[n];
        loss += err * err;

        // d(loss)/d(output): only the chosen action's head
        std::vector<double> delta(static_cast<std::size_t>(output_dim()), 0.0);
        delta[static_cast<std::size_t>(a)] = 2.0 * err / static_cast<double>(batch);

        for (std::size_t li = layers_.size(); li-- > 0;) {
            const Layer& l = layers_[li];
            Layer& g = grads.layers[li];
            const auto& x = cache.inputs[li];
            std::vector<double> prev_delta(static_cast<std::size_t>(l.in), 0.0);
            for (int o = 0; o < l.out; ++o) {
                const double d = delta[static_cast<std::size_t>(o)];
                if (d == 0.0) continue;
                g.bias[static_cast<std::size_t>(o)] += d;
                double* gw = &g.weights[static_cast<std::size_t>(o) * l.in];
                const double* w = &l.weights[static_cast<std::size_t>(o) * l.in];
                for (int i = 0; i < l.in; ++i) {
                    gw[i] += d * x[static_cast<std::size_t>(i)];
                    prev_delta[static_cast<std::size_t>(i)] += d * w[i];
                }
            }
            if (li > 0) {
                // gate through the rectifier of the previous layer's output
                for (int i = 0; i < l.in; ++i)
                    if (x[static_cast<std::size_t>(i)] <= 0.0)
                        prev_delta[static_cast<std::size_t>(i)] = 0.0;
                delta = std::move(prev_delta);
            }
        }
    }
    return loss / static_cast<double>(batch);
}

void Mlp::sgd_step(const Gradients& grads, double learning_rate) {
    if (grads.layers.size() != layers_.size())
        throw ContractError("sgd_step: gradient shape mismatch");
    for (std::size_t li = 0; li < layers_.size(); ++li) {
        auto& l = layers_[li];
        const auto& g = grads.layers[li];
        for (std::size_t k = 0; k < l.weights.size(); ++k)
            l.weights[k] -= learning_rate * g.weights[k];
        for (std::size_t k = 0; k < l.bias.size(); ++k)
            l.bias[k] -= learning_rate * g.bias[k];
    }
}

std::vector<int> Mlp::layer_sizes() const {
    std::vector<int> sizes;
    if (layers_.empty()) return sizes;
    sizes.push_back(layers_.front().in);
    for (const auto& l : layers_) sizes.push_back(l.out);
    return sizes;
}

bool Mlp::finite() const {
    for (const auto& l : layers_) {
        for (double w : l.weights)
            if (!std::isfinite(w)) return false;
        for (double b : l.bias)
            if (!std::isfinite(b)) return false;
    }
    return true;
}

double Mlp::Gradients::global_norm() const {
    double sq = 0.0;
    for (const auto& l : layers) {
        for (double w : l.weights) sq += w * w;
        for (double b : l.bias) sq += b * b;
    }
    return std::sqrt(sq);
}

void Mlp::Gradients::scale(double s) {
    for (auto& l : layers) {
        for (auto& w : l.weights) w *= s;
        for (auto& b : l.bias) b *= s;
    }
}

double clip_gradients(Mlp::Gradients& grads, double max_norm) {
    const double norm = grads.global_norm();
    if (norm > max_norm && norm > 0.0) grads.scale(max_norm / norm);
    return norm;
}

int argmax(std::span<const double> values) {
    if (values.empty()) throw ContractError("argmax: empty input");
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i)
        if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)])
            best = i;
    return best;
}

namespace {

constexpr char kMagic[4] = {'E', 'T', 'W', 'Q'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::ifstream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ofstream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::ifstream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

}  // namespace

void Mlp::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open checkpoint for writing: " + path);
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(layers_.size()));
    for (const auto& l : layers_) {
        put_u32(out, static_cast<std::uint32_t>(l.in));
        put_u32(out, static_cast<std::uint32_t>(l.out));
    }
    for (const auto& l : layers_) {
        for (double w : l.weights) put_f64(out, w);
        for (double b : l.bias) put_f64(out, b);
    }
    if (!out) throw ValidationError("failed writing checkpoint: " + path);
}

Mlp Mlp::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open checkpoint: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw ValidationError("not a checkpoint file: " + path);
    if (get_u32(in) != kVersion)
        throw ValidationError("unsupported checkpoint version: " + path);
    const std::uint32_t n_layers = get_u32(in);
    if (n_layers == 0 || n_layers > 64)
        throw ValidationError("corrupt checkpoint header: " + path);

    Mlp net;
    for (std::uint32_t i = 0; i < n_layers; ++i) {
        Layer l;
        l.in = static_cast<int>(get_u32(in));
        l.out = static_cast<int>(get_u32(in));
        if (!in || l.in <= 0 || l.out <= 0)
            throw ValidationError("corrupt checkpoint shapes: " + path);
        net.layers_.push_back(std::move(l));
    }
    for (auto& l : net.layers_) {
        l.weights.resize(static_cast<std::size_t>(l.in) * l.out);
        for (auto& w : l.weights) w = get_f64(in);
        l.bias.resize(static_cast<std::size_t>(l.out));
        for (auto& b : l.bias) b = get_f64(in);
    }
    if (!in) throw ValidationError("truncated checkpoint: " + path);
    return net;
}

}  // namespace edgetwin
