#include "cfadv/generative.hpp"

#include <cmath>
#include <stdexcept>

namespace cfadv {

std::string to_string(LipschitzMethod m) {
    return m == LipschitzMethod::width_weight_product ? "width_weight_product" : "operator_norm_product";
}

LipschitzMethod lipschitz_method_from_string(const std::string& s) {
    if (s == "width_weight_product") return LipschitzMethod::width_weight_product;
    if (s == "operator_norm_product") return LipschitzMethod::operator_norm_product;
    throw std::invalid_argument("unknown lipschitz method: " + s);
}

Autoencoder train_autoencoder(const Dataset& ds, const std::vector<std::size_t>& arch,
                              const TrainConfig& cfg, bool linear, TrainStats* stats) {
    cfg.validate();
    if (arch.empty()) throw std::invalid_argument("train_autoencoder: empty architecture");
    const auto& rows = ds.split.train;
    if (rows.empty()) throw std::invalid_argument("train_autoencoder: empty training split");

    const std::size_t d = ds.dim();
    const std::size_t k = arch.back();
    std::vector<std::size_t> enc_widths{d};
    enc_widths.insert(enc_widths.end(), arch.begin(), arch.end());
    std::vector<std::size_t> dec_widths{k};
    dec_widths.insert(dec_widths.end(), arch.begin(), arch.end() - 1);
    dec_widths.push_back(d);

    Rng rng(cfg.seed);
    Autoencoder ae;
    ae.latent_dim = k;
    ae.linear = linear;
    ae.encoder = make_stack(enc_widths, /*relu_hidden=*/!linear, rng);
    ae.decoder = make_stack(dec_widths, /*relu_hidden=*/!linear, rng);

    auto mean_loss = [&] {
        double loss = 0.0;
        for (auto r : rows) {
            const Vec rec = ae.decoder.forward(ae.encoder.forward(ds.row(r)));
            for (std::size_t j = 0; j < d; ++j) {
                const double e = rec[j] - ds.X(r, j);
                loss += e * e;
            }
        }
        return loss / static_cast<double>(rows.size() * d);
    };
    if (stats) stats->loss_initial = mean_loss();

    Adam opt_enc(ae.encoder, cfg.adam());
    Adam opt_dec(ae.decoder, cfg.adam());
    StackGrads genc(ae.encoder), gdec(ae.decoder);
    std::vector<std::size_t> order(rows.begin(), rows.end());
    ForwardTrace tenc, tdec;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            genc.zero();
            gdec.zero();
            for (std::size_t ki = start; ki < stop; ++ki) {
                const auto r = order[ki];
                const Vec z = forward_trace(ae.encoder, ds.row(r), tenc);
                const Vec rec = forward_trace(ae.decoder, z, tdec);
                Vec d_rec(d);
                for (std::size_t j = 0; j < d; ++j)
                    d_rec[j] = 2.0 * (rec[j] - ds.X(r, j)) / static_cast<double>(d);
                const Vec d_z = backprop(ae.decoder, tdec, std::move(d_rec), &gdec);
                backprop(ae.encoder, tenc, d_z, &genc);
            }
            const double inv = 1.0 / static_cast<double>(stop - start);
            genc.scale(inv);
            gdec.scale(inv);
            opt_enc.step(ae.encoder, genc);
            opt_dec.step(ae.decoder, gdec);
        }
    }
    if (stats) stats->loss_final = mean_loss();
    return ae;
}

Vec encode(const Autoencoder& ae, std::span<const double> x) {
    if (ae.encoder.in_dim() != x.size()) throw std::invalid_argument("encode: dimension mismatch");
    return ae.encoder.forward(x);
}

Vec decode(const Autoencoder& ae, std::span<const double> z) {
    if (ae.decoder.in_dim() != z.size()) throw std::invalid_argument("decode: dimension mismatch");
    return ae.decoder.forward(z);
}

LipschitzEstimate lipschitz_bound(const LayerStack& decoder, double activation_lipschitz,
                                  LipschitzMethod method, NormOrder p) {
    if (decoder.layers.empty()) throw std::invalid_argument("lipschitz_bound: empty decoder");
    LipschitzEstimate est;
    est.method = method;
    est.activation_lipschitz = activation_lipschitz;
    est.depth = static_cast<int>(decoder.layers.size());

    if (method == LipschitzMethod::width_weight_product) {
        std::size_t c = 0;
        double w_max = 0.0;
        for (const auto& layer : decoder.layers) {
            c = std::max(c, layer.W.cols);  // input-side width of each weight matrix
            for (double w : layer.W.a) w_max = std::max(w_max, std::abs(w));
        }
        est.max_width = c;
        est.w_max = w_max;
        est.L = std::pow(activation_lipschitz * static_cast<double>(c) * w_max,
                         static_cast<double>(est.depth));
    } else {
        double prod = 1.0;
        for (const auto& layer : decoder.layers) prod *= operator_norm(layer.W, p);
        est.L = prod * std::pow(activation_lipschitz, static_cast<double>(est.depth - 1));
    }
    if (!(est.L > 0.0) || !std::isfinite(est.L))
        throw std::runtime_error("lipschitz_bound: estimate is not finite and positive");
    return est;
}

Autoencoder identity_autoencoder(std::size_t d) {
    Autoencoder ae;
    ae.latent_dim = d;
    ae.linear = true;
    DenseLayer id;
    id.W = Mat::identity(d);
    id.b.assign(d, 0.0);
    ae.encoder.relu_hidden = false;
    ae.encoder.layers.push_back(id);
    ae.decoder.relu_hidden = false;
    ae.decoder.layers.push_back(id);
    return ae;
}

}  // namespace cfadv
