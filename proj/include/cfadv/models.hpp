#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "cfadv/data.hpp"
#include "cfadv/nn.hpp"

namespace cfadv {

struct LinearModel {
    Vec w;
    double b = 0.0;
};

// ReLU hidden layers, single output logit. The sigmoid lives in the loss and
// in the 0.5-threshold label map, not in the stack.
struct MlpModel {
    LayerStack net;
};

using ScoringModel = std::variant<LinearModel, MlpModel>;

// First-order surrogate f^(x') = w.x' + b anchored so f^(anchor) = f(anchor).
struct LocalLinearization {
    Vec w;
    double b = 0.0;
    Vec anchor;
};

struct TrainConfig {
    std::size_t batch_size = 64;
    int epochs = 50;
    double learning_rate = 0.002;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t seed = 0;

    void validate() const;
    AdamConfig adam() const { return {learning_rate, beta1, beta2, eps}; }
};

struct TrainStats {
    double loss_initial = 0.0;
    double loss_final = 0.0;
};

double predict_logit(const LinearModel& m, std::span<const double> x);
double predict_logit(const MlpModel& m, std::span<const double> x);
double predict_logit(const ScoringModel& m, std::span<const double> x);

// 1 iff the logit is >= 0 (sigmoid >= 0.5; the tie at 0 breaks up).
int predict_label(const ScoringModel& m, std::span<const double> x);
inline int label_of_logit(double logit) { return logit >= 0.0 ? 1 : 0; }

Vec input_gradient(const LinearModel& m, std::span<const double> x);
Vec input_gradient(const MlpModel& m, std::span<const double> x);
Vec input_gradient(const ScoringModel& m, std::span<const double> x);

LocalLinearization local_linearize(const ScoringModel& m, std::span<const double> x);
inline LinearModel to_linear(const LocalLinearization& lin) { return {lin.w, lin.b}; }

// Mini-batch Adam on binary cross-entropy; batch order reshuffled each epoch
// from the seeded generator. Throws on single-class training data.
LinearModel train_logistic(const Dataset& ds, const TrainConfig& cfg, TrainStats* stats = nullptr);
MlpModel train_mlp(const Dataset& ds, const std::vector<std::size_t>& hidden,
                   const TrainConfig& cfg, TrainStats* stats = nullptr);

double accuracy(const ScoringModel& m, const Dataset& ds, const std::vector<std::size_t>& rows);

}  // namespace cfadv
