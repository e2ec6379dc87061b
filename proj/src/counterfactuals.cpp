#include "cfadv/counterfactuals.hpp"

#include <cmath>
#include <stdexcept>

#include "cfadv/ioutil.hpp"

namespace cfadv {

GenerationResult make_result(std::string method, const Vec& x, Vec x_prime) {
    GenerationResult r;
    r.method = std::move(method);
    r.x = x;
    r.x_prime = std::move(x_prime);
    r.delta.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r.delta[i] = r.x_prime[i] - x[i];
    return r;
}

void ScfeParams::validate() const {
    if (score_tol <= 0.0) throw std::invalid_argument("scfe: score_tol must be positive");
    if (lambda_init <= 0.0) throw std::invalid_argument("scfe: lambda_init must be positive");
    if (lambda_growth <= 1.0) throw std::invalid_argument("scfe: lambda_growth must be > 1");
    if (lambda_steps < 1 || adam_steps < 1) throw std::invalid_argument("scfe: empty budget");
}

Vec scfe_closed_form(const LinearModel& lin, const Vec& x, double s, double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("scfe_closed_form: lambda must be positive");
    const double wn2 = dot(lin.w, lin.w);
    if (wn2 == 0.0) throw std::invalid_argument("scfe_closed_form: zero weight vector");
    const double m = s - predict_logit(lin, x);

    Mat a = Mat::outer(lin.w, lin.w);
    for (std::size_t i = 0; i < a.rows; ++i) a(i, i) += lambda;
    Vec rhs(lin.w.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = m * lin.w[i];
    return solve_spd(std::move(a), std::move(rhs));
}

Vec scfe_optimal_delta(const LinearModel& lin, const Vec& x, double s) {
    const double wn2 = dot(lin.w, lin.w);
    if (wn2 == 0.0) throw std::invalid_argument("scfe_optimal_delta: zero weight vector");
    const double m = s - predict_logit(lin, x);
    Vec delta(lin.w.size());
    for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = (m / wn2) * lin.w[i];
    return delta;
}

double scfe_lambda_star(const LinearModel& lin) {
    const double wn2 = dot(lin.w, lin.w);
    if (wn2 == 0.0) throw std::invalid_argument("scfe_lambda_star: zero weight vector");
    if (wn2 == 1.0) throw std::invalid_argument("scfe_lambda_star: undefined for ||w||^2 == 1");
    return wn2 / (wn2 - 1.0);
}

GenerationResult scfe_iterative(const ScoringModel& model, const Vec& x, const ScfeParams& p) {
    p.validate();
    const double s = p.target_score;

    GenerationResult best = make_result("scfe", x, x);
    best.params["s"] = format_g17(s);
    best.params["score_tol"] = format_g17(p.score_tol);

    double best_residual = std::abs(predict_logit(model, x) - s);
    if (best_residual <= p.score_tol) {
        best.success = true;
        best.params["lambda"] = format_g17(p.lambda_init);
        return best;
    }

    const std::size_t d = x.size();
    double lambda = p.lambda_init;
    int iterations = 0;
    for (int step = 0; step < p.lambda_steps; ++step) {
        Vec xp = x;
        AdamVec opt(d, {p.adam_lr, p.beta1, p.beta2, p.eps});
        for (int t = 0; t < p.adam_steps; ++t) {
            const double f = predict_logit(model, xp);
            Vec g = input_gradient(model, xp);
            const double coeff = 2.0 * (f - s);
            for (std::size_t i = 0; i < d; ++i)
                g[i] = coeff * g[i] + 2.0 * lambda * (xp[i] - x[i]);
            opt.step(xp, g, scheduled_lr(p.adam_lr, p.adam_lr_end, t, p.adam_steps));
        }
        iterations += p.adam_steps;
        const double residual = std::abs(predict_logit(model, xp) - s);
        if (residual < best_residual) {
            best_residual = residual;
            best = make_result("scfe", x, xp);
            best.params["s"] = format_g17(s);
            best.params["score_tol"] = format_g17(p.score_tol);
            best.params["lambda"] = format_g17(lambda);
        }
        if (residual <= p.score_tol) {
            best.success = true;
            best.iterations = iterations;
            return best;
        }
        lambda *= p.lambda_growth;
    }
    best.iterations = iterations;
    best.success = false;
    return best;
}

void LatentSearchParams::validate() const {
    if (r0 <= 0.0) throw std::invalid_argument("latent search: r0 must be positive");
    if (growth <= 1.0) throw std::invalid_argument("latent search: growth must be > 1");
    if (samples < 1 || max_rounds < 1) throw std::invalid_argument("latent search: empty budget");
}

Vec sample_lp_annulus(Rng& rng, std::size_t k, NormOrder p, double r_lo, double r_hi) {
    if (k == 0 || r_hi <= 0.0 || r_lo < 0.0 || r_lo >= r_hi)
        throw std::invalid_argument("sample_lp_annulus: bad radius range");
    // Direction with the cone measure of the l_p sphere: normalize a draw from
    // the generalized Gaussian matching p (normal / Laplace / uniform).
    Vec g(k);
    switch (p) {
        case NormOrder::two:
            for (auto& v : g) v = rng.normal();
            break;
        case NormOrder::one:
            for (auto& v : g) {
                const double e = -std::log1p(-rng.uniform());
                v = (rng.uniform() < 0.5) ? -e : e;
            }
            break;
        case NormOrder::inf:
            for (auto& v : g) v = rng.uniform(-1.0, 1.0);
            break;
    }
    double n = norm(g, p);
    if (n == 0.0) {  // essentially impossible; retry keeps the contract
        return sample_lp_annulus(rng, k, p, r_lo, r_hi);
    }
    // rho^k uniform over (r_lo^k, r_hi^k] makes the draw volume-uniform.
    const double ratio = r_lo / r_hi;
    const double ratio_k = std::pow(ratio, static_cast<double>(k));
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double rho = r_hi * std::pow(ratio_k + u * (1.0 - ratio_k),
                                       1.0 / static_cast<double>(k));
    for (auto& v : g) v *= rho / n;
    return g;
}

Vec sample_lp_ball(Rng& rng, std::size_t k, NormOrder p, double r) {
    return sample_lp_annulus(rng, k, p, 0.0, r);
}

GenerationResult cchvae_search(const ScoringModel& model, const Autoencoder& ae, const Vec& x,
                               const LatentSearchParams& p) {
    p.validate();
    const int label0 = predict_label(model, x);
    const Vec z = encode(ae, x);
    const std::size_t k = z.size();
    Rng rng(p.seed);

    auto echo = [&](GenerationResult& r) {
        r.params["r0"] = format_g17(p.r0);
        r.params["growth"] = format_g17(p.growth);
        r.params["samples"] = std::to_string(p.samples);
        r.params["p"] = to_string(p.p);
    };

    double radius = p.r0;
    for (int round = 0; round < p.max_rounds; ++round) {
        bool found = false;
        double best_norm = 0.0;
        Vec best_xp;
        for (int i = 0; i < p.samples; ++i) {
            Vec dz = sample_lp_ball(rng, k, p.p, radius);
            Vec zt(k);
            for (std::size_t j = 0; j < k; ++j) zt[j] = z[j] + dz[j];
            Vec xp = decode(ae, zt);
            for (auto idx : p.protected_idx) xp[idx] = x[idx];
            if (predict_label(model, xp) == label0) continue;
            const double n = norm(dz, p.p);
            if (!found || n < best_norm) {
                found = true;
                best_norm = n;
                best_xp = std::move(xp);
            }
        }
        if (found) {
            GenerationResult r = make_result("cchvae", x, std::move(best_xp));
            r.success = true;
            r.radius_used = radius;
            echo(r);
            return r;
        }
        if (round + 1 < p.max_rounds) radius *= p.growth;
    }
    GenerationResult r = make_result("cchvae", x, x);
    r.success = false;
    r.radius_used = radius;
    echo(r);
    return r;
}

}  // namespace cfadv
