#pragma once

#include <string>

#include "cfadv/data.hpp"
#include "cfadv/models.hpp"
#include "cfadv/nn.hpp"

namespace cfadv {

// Encoder/decoder pair giving the data manifold used by the latent search
// methods. With `linear` set both stacks are free of nonlinearities, which
// keeps the Lipschitz estimates tight.
struct Autoencoder {
    LayerStack encoder;
    LayerStack decoder;
    std::size_t latent_dim = 0;
    bool linear = false;
};

enum class LipschitzMethod { width_weight_product, operator_norm_product };

std::string to_string(LipschitzMethod m);
LipschitzMethod lipschitz_method_from_string(const std::string& s);

struct LipschitzEstimate {
    double L = 0.0;
    LipschitzMethod method = LipschitzMethod::width_weight_product;
    // Inputs of the width/weight formula (meaningful for that method).
    double activation_lipschitz = 1.0;  // M
    std::size_t max_width = 0;          // c
    double w_max = 0.0;
    int depth = 0;
};

// arch = {hidden..., latent_dim}; the decoder reuses the hidden widths in the
// same order and maps back to the input dimension. Trains mean squared
// reconstruction error with mini-batch Adam.
Autoencoder train_autoencoder(const Dataset& ds, const std::vector<std::size_t>& arch,
                              const TrainConfig& cfg, bool linear, TrainStats* stats = nullptr);

Vec encode(const Autoencoder& ae, std::span<const double> x);
Vec decode(const Autoencoder& ae, std::span<const double> z);

// Upper bound on the decoder's Lipschitz constant.
//   width_weight_product:  (M * c * w_max)^depth with c the max input-side
//                          layer width and w_max the largest |weight|.
//   operator_norm_product: product of induced p-norms of the weight
//                          matrices times M^(depth-1); tighter in practice.
LipschitzEstimate lipschitz_bound(const LayerStack& decoder, double activation_lipschitz,
                                  LipschitzMethod method, NormOrder p = NormOrder::two);

// Hand-built k=d autoencoder whose encoder and decoder are the identity;
// useful wherever the latent searches need an exactly known manifold.
Autoencoder identity_autoencoder(std::size_t d);

}  // namespace cfadv
