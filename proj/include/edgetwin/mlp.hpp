#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace edgetwin {

// Fully connected network: rectified-linear hidden layers, linear output
// head. Small enough that plain scalar arithmetic is fine.
class Mlp {
public:
    struct Layer {
        int in = 0;
        int out = 0;
        std::vector<double> weights;  // row-major, out x in
        std::vector<double> bias;     // out
    };

    struct Gradients {
        std::vector<Layer> layers;  // same shapes, gradient values

        double global_norm() const;
        void scale(double s);
    };

    Mlp() = default;
    // layer_sizes = {input, hidden..., output}; weights seeded uniformly
    // scaled by fan-in
    Mlp(const std::vector<int>& layer_sizes, std::uint64_t seed);

    std::vector<double> forward(std::span<const double> input) const;

    // Gradients of the mean squared TD error over the batch: only the chosen
    // action's output participates per sample. Returns the loss.
    double td_backward(const std::vector<std::vector<double>>& states,
                       const std::vector<int>& actions,
                       const std::vector<double>& targets,
                       Gradients& grads) const;

    Gradients zero_gradients() const;
    void sgd_step(const Gradients& grads, double learning_rate);

    int input_dim() const { return layers_.empty() ? 0 : layers_.front().in; }
    int output_dim() const { return layers_.empty() ? 0 : layers_.back().out; }
    std::vector<int> layer_sizes() const;
    const std::vector<Layer>& layers() const { return layers_; }
    std::vector<Layer>& layers() { return layers_; }

    bool finite() const;

    void save(const std::string& path) const;
    static Mlp load(const std::string& path);

private:
    std::vector<Layer> layers_;
};

// Lowest index among the maxima.
int argmax(std::span<const double> values);

// Scales gradients down to the given global L2 norm when they exceed it;
// returns the pre-clip norm.
double clip_gradients(Mlp::Gradients& grads, double max_norm);

}  // namespace edgetwin
