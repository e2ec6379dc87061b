#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cfadv/linalg.hpp"
#include "cfadv/rng.hpp"

namespace cfadv {

// Fully connected stack shared by the classifiers and the autoencoders.
// ReLU after every layer except the last when relu_hidden is set; a stack
// with relu_hidden == false is purely linear end to end.

struct DenseLayer {
    Mat W;  // out x in
    Vec b;
};

struct LayerStack {
    std::vector<DenseLayer> layers;
    bool relu_hidden = true;

    std::size_t in_dim() const { return layers.empty() ? 0 : layers.front().W.cols; }
    std::size_t out_dim() const { return layers.empty() ? 0 : layers.back().W.rows; }

    Vec forward(std::span<const double> x) const;
};

struct ForwardTrace {
    std::vector<Vec> inputs;  // inputs[l] = activation fed into layer l
    std::vector<Vec> pre;     // pre[l] = W x + b before the nonlinearity
};

Vec forward_trace(const LayerStack& stack, std::span<const double> x, ForwardTrace& trace);

struct StackGrads {
    std::vector<Mat> dW;
    std::vector<Vec> db;

    explicit StackGrads(const LayerStack& stack);
    void zero();
    void scale(double s);
};

// Backpropagates d_out = dLoss/d(stack output). Accumulates parameter
// gradients into `grads` when non-null and returns dLoss/d(input).
// ReLU subgradient at 0 is taken as 0.
Vec backprop(const LayerStack& stack, const ForwardTrace& trace, Vec d_out, StackGrads* grads);

// widths = {in, h1, ..., out}. Weights and biases uniform in
// [-1/sqrt(fan_in), +1/sqrt(fan_in)], drawn layer by layer from rng.
LayerStack make_stack(const std::vector<std::size_t>& widths, bool relu_hidden, Rng& rng);

std::size_t param_count(const LayerStack& stack);

struct AdamConfig {
    double learning_rate = 0.002;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Adam over a stack's parameters (weights then bias, in layer order).
class Adam {
  public:
    Adam(const LayerStack& stack, AdamConfig cfg);
    void step(LayerStack& stack, const StackGrads& grads);
    void step(LayerStack& stack, const StackGrads& grads, double lr_override);

  private:
    AdamConfig cfg_;
    std::vector<double> m_, v_;
    long t_ = 0;
};

// Standalone Adam for optimizing a flat vector (the iterative generators).
class AdamVec {
  public:
    AdamVec(std::size_t n, AdamConfig cfg) : cfg_(cfg), m_(n, 0.0), v_(n, 0.0) {}
    void step(Vec& params, const Vec& grad, double lr);

  private:
    AdamConfig cfg_;
    std::vector<double> m_, v_;
    long t_ = 0;
};

double sigmoid(double t);
// Numerically stable binary cross-entropy on a logit.
double bce_with_logit(double logit, int label);

// Step-size schedule for the iterative generators: constant for the first
// half of the budget (reach), then geometric decay to lr_end (precision).
inline double scheduled_lr(double lr0, double lr_end, int t, int total) {
    const int warm = total / 2;
    if (t < warm || total - warm <= 1 || lr0 <= 0.0) return lr0;
    const double frac = static_cast<double>(t - warm) / static_cast<double>(total - warm - 1);
    return lr0 * std::pow(lr_end / lr0, frac);
}

}  // namespace cfadv
