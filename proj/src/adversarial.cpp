#include "cfadv/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cfadv/ioutil.hpp"

namespace cfadv {

void CwParams::validate() const {
    if (c <= 0.0) throw std::invalid_argument("cw: c must be positive");
    if (max_steps < 1) throw std::invalid_argument("cw: empty step budget");
}

void DeepFoolParams::validate() const {
    if (max_iter < 1) throw std::invalid_argument("deepfool: max_iter must be >= 1");
    if (overshoot < 0.0) throw std::invalid_argument("deepfool: overshoot must be >= 0");
}

double cw_loss_binary(const LinearModel& lin, const Vec& x) {
    return std::max(0.0, -2.0 * predict_logit(lin, x));
}

Vec cw_closed_form(const LinearModel& lin, const Vec& x, double c) {
    if (c <= 0.0) throw std::invalid_argument("cw_closed_form: c must be positive");
    const double wn2 = dot(lin.w, lin.w);
    if (wn2 == 0.0) throw std::invalid_argument("cw_closed_form: zero weight vector");
    if (label_of_logit(predict_logit(lin, x)) != 0)
        throw std::invalid_argument("cw_closed_form: instance is not negatively predicted");
    Vec delta(lin.w.size());
    for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = c * lin.w[i];
    return delta;
}

GenerationResult cw_iterative(const ScoringModel& model, const Vec& x, const CwParams& p) {
    p.validate();
    const int label0 = predict_label(model, x);
    const std::size_t d = x.size();

    // The minimizer sits on the decision boundary whenever c is large enough,
    // so the iterates straddle it; keep the smallest flipped iterate seen, as
    // C&W implementations do, and fall back to the final point.
    Vec xp = x;
    Vec best_flipped;
    double best_norm2 = 0.0;
    AdamVec opt(d, {p.adam_lr, p.beta1, p.beta2, p.eps});
    for (int t = 0; t < p.max_steps; ++t) {
        const double f = predict_logit(model, xp);
        Vec g(d, 0.0);
        if (f < 0.0) {  // hinge active
            g = input_gradient(model, xp);
            for (auto& v : g) v *= -2.0 * p.c;
        }
        for (std::size_t i = 0; i < d; ++i) g[i] += 2.0 * (xp[i] - x[i]);
        opt.step(xp, g, scheduled_lr(p.adam_lr, p.adam_lr_end, t, p.max_steps));
        if (p.clip_box) {
            for (auto& v : xp) v = std::clamp(v, 0.0, 1.0);
        }
        if (label_of_logit(predict_logit(model, xp)) != label0) {
            double n2 = 0.0;
            for (std::size_t i = 0; i < d; ++i) n2 += (xp[i] - x[i]) * (xp[i] - x[i]);
            if (best_flipped.empty() || n2 < best_norm2) {
                best_flipped = xp;
                best_norm2 = n2;
            }
        }
    }

    GenerationResult r =
        make_result("cw", x, best_flipped.empty() ? std::move(xp) : std::move(best_flipped));
    r.success = predict_label(model, r.x_prime) != label0;
    r.iterations = p.max_steps;
    r.params["c"] = format_g17(p.c);
    r.params["clip_box"] = p.clip_box ? "1" : "0";
    return r;
}

GenerationResult deepfool(const ScoringModel& model, const Vec& x, const DeepFoolParams& p) {
    p.validate();
    const double f0 = predict_logit(model, x);
    const int label0 = label_of_logit(f0);
    const std::size_t d = x.size();

    Vec xt = x;
    int iters = 0;
    bool vanished = false;
    // Loop while the logit keeps the starting sign. The closed-form step
    // lands on the boundary up to rounding, so near-zero counts as crossed.
    const double boundary_tol = 1e-12 * (1.0 + std::abs(f0));
    while (iters < p.max_iter) {
        const double f = predict_logit(model, xt);
        if (f * f0 <= 0.0 && iters > 0) break;
        if (std::abs(f) <= boundary_tol) break;
        const Vec w = input_gradient(model, xt);
        const double wn2 = dot(w, w);
        if (wn2 < 1e-20) {
            vanished = true;
            break;
        }
        const double step = -f / wn2;
        for (std::size_t i = 0; i < d; ++i) xt[i] += step * w[i];
        ++iters;
    }

    Vec xp(d);
    for (std::size_t i = 0; i < d; ++i) xp[i] = x[i] + (1.0 + p.overshoot) * (xt[i] - x[i]);
    GenerationResult r = make_result("deepfool", x, std::move(xp));
    r.iterations = iters;
    r.success = !vanished && predict_label(model, r.x_prime) != label0;
    r.params["overshoot"] = format_g17(p.overshoot);
    if (vanished) r.params["note"] = "vanishing_gradient";
    return r;
}

GenerationResult nae_search(const ScoringModel& model, const Autoencoder& ae, const Vec& x,
                            const LatentSearchParams& p) {
    p.validate();
    const int label0 = predict_label(model, x);
    const Vec z = encode(ae, x);
    const std::size_t k = z.size();
    Rng rng(p.seed);
    const double dr = p.r0;

    auto echo = [&](GenerationResult& r) {
        r.params["dr"] = format_g17(dr);
        r.params["samples"] = std::to_string(p.samples);
        r.params["p"] = to_string(p.p);
    };

    for (int round = 0; round < p.max_rounds; ++round) {
        const double lo = dr * round;
        const double hi = dr * (round + 1);
        bool found = false;
        double best_norm = 0.0;
        Vec best_xp;
        for (int i = 0; i < p.samples; ++i) {
            Vec dz = sample_lp_annulus(rng, k, p.p, lo, hi);
            Vec zt(k);
            for (std::size_t j = 0; j < k; ++j) zt[j] = z[j] + dz[j];
            Vec xp = decode(ae, zt);
            if (predict_label(model, xp) == label0) continue;
            const double n = norm(dz, p.p);
            if (!found || n < best_norm) {
                found = true;
                best_norm = n;
                best_xp = std::move(xp);
            }
        }
        if (found) {
            GenerationResult r = make_result("nae", x, std::move(best_xp));
            r.success = true;
            r.radius_used = hi;
            echo(r);
            return r;
        }
    }
    GenerationResult r = make_result("nae", x, x);
    r.success = false;
    r.radius_used = dr * p.max_rounds;
    echo(r);
    return r;
}

}  // namespace cfadv
