#include "cfadv/models.hpp"

#include <cmath>
#include <stdexcept>

namespace cfadv {

void TrainConfig::validate() const {
    if (batch_size < 1) throw std::invalid_argument("train config: batch_size must be >= 1");
    if (epochs < 1) throw std::invalid_argument("train config: epochs must be >= 1");
    if (learning_rate < 0.0) throw std::invalid_argument("train config: negative learning rate");
    if (eps <= 0.0) throw std::invalid_argument("train config: eps must be positive");
}

double predict_logit(const LinearModel& m, std::span<const double> x) {
    if (m.w.size() != x.size()) throw std::invalid_argument("predict_logit: dimension mismatch");
    return dot(m.w, x) + m.b;
}

double predict_logit(const MlpModel& m, std::span<const double> x) {
    if (m.net.in_dim() != x.size()) throw std::invalid_argument("predict_logit: dimension mismatch");
    return m.net.forward(x)[0];
}

double predict_logit(const ScoringModel& m, std::span<const double> x) {
    return std::visit([&](const auto& model) { return predict_logit(model, x); }, m);
}

int predict_label(const ScoringModel& m, std::span<const double> x) {
    return label_of_logit(predict_logit(m, x));
}

Vec input_gradient(const LinearModel& m, std::span<const double> x) {
    if (m.w.size() != x.size()) throw std::invalid_argument("input_gradient: dimension mismatch");
    return m.w;
}

Vec input_gradient(const MlpModel& m, std::span<const double> x) {
    if (m.net.in_dim() != x.size())
        throw std::invalid_argument("input_gradient: dimension mismatch");
    ForwardTrace trace;
    forward_trace(m.net, x, trace);
    return backprop(m.net, trace, Vec{1.0}, nullptr);
}

Vec input_gradient(const ScoringModel& m, std::span<const double> x) {
    return std::visit([&](const auto& model) { return input_gradient(model, x); }, m);
}

LocalLinearization local_linearize(const ScoringModel& m, std::span<const double> x) {
    LocalLinearization lin;
    lin.w = input_gradient(m, x);
    lin.anchor.assign(x.begin(), x.end());
    lin.b = predict_logit(m, x) - dot(lin.w, x);
    return lin;
}

namespace {

// Shared BCE training loop over an arbitrary logit stack.
LayerStack train_bce_stack(const Dataset& ds, const std::vector<std::size_t>& widths,
                           const TrainConfig& cfg, TrainStats* stats) {
    cfg.validate();
    const auto& rows = ds.split.train;
    if (rows.empty()) throw std::invalid_argument("train: empty training split");
    bool has0 = false, has1 = false;
    for (auto r : rows) (ds.y[r] ? has1 : has0) = true;
    if (!has0 || !has1)
        throw std::invalid_argument("train: training split contains a single class");

    Rng rng(cfg.seed);
    LayerStack stack = make_stack(widths, /*relu_hidden=*/true, rng);

    auto mean_loss = [&] {
        double loss = 0.0;
        for (auto r : rows) loss += bce_with_logit(stack.forward(ds.row(r))[0], ds.y[r]);
        return loss / static_cast<double>(rows.size());
    };
    if (stats) stats->loss_initial = mean_loss();

    Adam opt(stack, cfg.adam());
    StackGrads grads(stack);
    std::vector<std::size_t> order(rows.begin(), rows.end());
    ForwardTrace trace;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            grads.zero();
            for (std::size_t k = start; k < stop; ++k) {
                const auto r = order[k];
                const double logit = forward_trace(stack, ds.row(r), trace)[0];
                const double dlogit = sigmoid(logit) - ds.y[r];
                backprop(stack, trace, Vec{dlogit}, &grads);
            }
            grads.scale(1.0 / static_cast<double>(stop - start));
            opt.step(stack, grads);
        }
    }
    if (stats) stats->loss_final = mean_loss();
    return stack;
}

}  // namespace

LinearModel train_logistic(const Dataset& ds, const TrainConfig& cfg, TrainStats* stats) {
    const LayerStack stack = train_bce_stack(ds, {ds.dim(), 1}, cfg, stats);
    LinearModel m;
    m.w.assign(stack.layers[0].W.a.begin(), stack.layers[0].W.a.end());
    m.b = stack.layers[0].b[0];
    return m;
}

MlpModel train_mlp(const Dataset& ds, const std::vector<std::size_t>& hidden,
                   const TrainConfig& cfg, TrainStats* stats) {
    std::vector<std::size_t> widths{ds.dim()};
    widths.insert(widths.end(), hidden.begin(), hidden.end());
    widths.push_back(1);
    return MlpModel{train_bce_stack(ds, widths, cfg, stats)};
}

double accuracy(const ScoringModel& m, const Dataset& ds, const std::vector<std::size_t>& rows) {
    if (rows.empty()) return 0.0;
    std::size_t hits = 0;
    for (auto r : rows) hits += (predict_label(m, ds.row(r)) == ds.y[r]);
    return static_cast<double>(hits) / static_cast<double>(rows.size());
}

}  // namespace cfadv
