#include "cfadv/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace cfadv {

Vec LayerStack::forward(std::span<const double> x) const {
    Vec h(x.begin(), x.end());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        Vec z = matvec(layers[l].W, h);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += layers[l].b[i];
        if (relu_hidden && l + 1 < layers.size()) {
            for (auto& v : z) v = v > 0.0 ? v : 0.0;
        }
        h = std::move(z);
    }
    return h;
}

Vec forward_trace(const LayerStack& stack, std::span<const double> x, ForwardTrace& trace) {
    trace.inputs.assign(stack.layers.size(), {});
    trace.pre.assign(stack.layers.size(), {});
    Vec h(x.begin(), x.end());
    for (std::size_t l = 0; l < stack.layers.size(); ++l) {
        trace.inputs[l] = h;
        Vec z = matvec(stack.layers[l].W, h);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += stack.layers[l].b[i];
        trace.pre[l] = z;
        if (stack.relu_hidden && l + 1 < stack.layers.size()) {
            for (auto& v : z) v = v > 0.0 ? v : 0.0;
        }
        h = std::move(z);
    }
    return h;
}

StackGrads::StackGrads(const LayerStack& stack) {
    for (const auto& layer : stack.layers) {
        dW.emplace_back(layer.W.rows, layer.W.cols);
        db.emplace_back(layer.b.size(), 0.0);
    }
}

void StackGrads::zero() {
    for (auto& m : dW) std::fill(m.a.begin(), m.a.end(), 0.0);
    for (auto& v : db) std::fill(v.begin(), v.end(), 0.0);
}

void StackGrads::scale(double s) {
    for (auto& m : dW)
        for (auto& x : m.a) x *= s;
    for (auto& v : db)
        for (auto& x : v) x *= s;
}

Vec backprop(const LayerStack& stack, const ForwardTrace& trace, Vec d_out, StackGrads* grads) {
    Vec d = std::move(d_out);
    for (std::size_t li = stack.layers.size(); li-- > 0;) {
        const auto& layer = stack.layers[li];
        if (stack.relu_hidden && li + 1 < stack.layers.size()) {
            for (std::size_t i = 0; i < d.size(); ++i)
                if (trace.pre[li][i] <= 0.0) d[i] = 0.0;
        }
        if (grads) {
            for (std::size_t i = 0; i < layer.W.rows; ++i) {
                for (std::size_t j = 0; j < layer.W.cols; ++j)
                    grads->dW[li](i, j) += d[i] * trace.inputs[li][j];
                grads->db[li][i] += d[i];
            }
        }
        Vec d_in(layer.W.cols, 0.0);
        for (std::size_t i = 0; i < layer.W.rows; ++i)
            for (std::size_t j = 0; j < layer.W.cols; ++j) d_in[j] += layer.W(i, j) * d[i];
        d = std::move(d_in);
    }
    return d;
}

LayerStack make_stack(const std::vector<std::size_t>& widths, bool relu_hidden, Rng& rng) {
    if (widths.size() < 2) throw std::invalid_argument("make_stack: need at least in and out widths");
    LayerStack stack;
    stack.relu_hidden = relu_hidden;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        DenseLayer layer;
        layer.W = Mat(widths[l + 1], widths[l]);
        layer.b.assign(widths[l + 1], 0.0);
        const double bound = 1.0 / std::sqrt(static_cast<double>(widths[l]));
        for (auto& w : layer.W.a) w = rng.uniform(-bound, bound);
        for (auto& b : layer.b) b = rng.uniform(-bound, bound);
        stack.layers.push_back(std::move(layer));
    }
    return stack;
}

std::size_t param_count(const LayerStack& stack) {
    std::size_t n = 0;
    for (const auto& layer : stack.layers) n += layer.W.a.size() + layer.b.size();
    return n;
}

Adam::Adam(const LayerStack& stack, AdamConfig cfg)
    : cfg_(cfg), m_(param_count(stack), 0.0), v_(param_count(stack), 0.0) {}

void Adam::step(LayerStack& stack, const StackGrads& grads) {
    step(stack, grads, cfg_.learning_rate);
}

void Adam::step(LayerStack& stack, const StackGrads& grads, double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
    const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
    std::size_t k = 0;
    auto update = [&](double& p, double g) {
        m_[k] = cfg_.beta1 * m_[k] + (1.0 - cfg_.beta1) * g;
        v_[k] = cfg_.beta2 * v_[k] + (1.0 - cfg_.beta2) * g * g;
        p -= lr * (m_[k] / bc1) / (std::sqrt(v_[k] / bc2) + cfg_.eps);
        ++k;
    };
    for (std::size_t li = 0; li < stack.layers.size(); ++li) {
        auto& layer = stack.layers[li];
        for (std::size_t i = 0; i < layer.W.a.size(); ++i) update(layer.W.a[i], grads.dW[li].a[i]);
        for (std::size_t i = 0; i < layer.b.size(); ++i) update(layer.b[i], grads.db[li][i]);
    }
}

void AdamVec::step(Vec& params, const Vec& grad, double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
    const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
        v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
        params[i] -= lr * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + cfg_.eps);
    }
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double bce_with_logit(double logit, int label) {
    // max(t,0) - y*t + log(1 + exp(-|t|))
    return std::max(logit, 0.0) - label * logit + std::log1p(std::exp(-std::abs(logit)));
}

}  // namespace cfadv
