#include "cfadv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfadv {

std::string to_string(MethodPair pair) {
    switch (pair) {
        case MethodPair::scfe_vs_cw: return "scfe_vs_cw";
        case MethodPair::scfe_vs_deepfool: return "scfe_vs_deepfool";
        case MethodPair::cchvae_vs_nae: return "cchvae_vs_nae";
    }
    return "?";
}

MethodPair method_pair_from_string(const std::string& s) {
    if (s == "scfe_vs_cw") return MethodPair::scfe_vs_cw;
    if (s == "scfe_vs_deepfool") return MethodPair::scfe_vs_deepfool;
    if (s == "cchvae_vs_nae") return MethodPair::cchvae_vs_nae;
    throw std::invalid_argument("unknown method pair: " + s);
}

namespace {

// Shared core of the two gradient-pair bound matrices:
// (m/lambda) (I - w w^T / (lambda + ||w||^2)) + shift * I.
Mat bound_matrix(const LinearModel& lin, double m, double lambda, double shift) {
    const std::size_t d = lin.w.size();
    const double wn2 = dot(lin.w, lin.w);
    const double a = m / lambda;
    Mat mat(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j)
            mat(i, j) = -a * lin.w[i] * lin.w[j] / (lambda + wn2);
        mat(i, i) += a + shift;
    }
    return mat;
}

double induced_norm_sym(const Mat& m, NormOrder p) {
    if (p == NormOrder::two) {
        double best = 0.0;
        for (double ev : sym_eigenvalues(m)) best = std::max(best, std::abs(ev));
        return best;
    }
    return operator_norm(m, p);
}

void check_linear_inputs(const LinearModel& lin, const Vec& x, double lambda) {
    if (lin.w.size() != x.size()) throw std::invalid_argument("bound: dimension mismatch");
    if (lambda <= 0.0) throw std::invalid_argument("bound: lambda must be positive");
    if (dot(lin.w, lin.w) == 0.0) throw std::invalid_argument("bound: zero weight vector");
}

}  // namespace

double scfe_cw_bound(const LinearModel& lin, const Vec& x, double s, double lambda, double c,
                  NormOrder p) {
    check_linear_inputs(lin, x, lambda);
    const double m = s - predict_logit(lin, x);
    const Mat a = bound_matrix(lin, m, lambda, -c);
    return induced_norm_sym(a, p) * norm(lin.w, p);
}

double scfe_deepfool_bound(const LinearModel& lin, const Vec& x, double s, double lambda, NormOrder p) {
    check_linear_inputs(lin, x, lambda);
    const double f = predict_logit(lin, x);
    const double m = s - f;
    const double wn2 = dot(lin.w, lin.w);
    const Mat b = bound_matrix(lin, m, lambda, f / wn2);
    return induced_norm_sym(b, p) * norm(lin.w, p);
}

double manifold_pair_bound(double L, double r_c, double r_nae) {
    if (L <= 0.0) throw std::invalid_argument("manifold_pair_bound: L must be positive");
    if (r_c < 0.0 || r_nae < 0.0) throw std::invalid_argument("manifold_pair_bound: negative radius");
    return L * (r_c + r_nae);
}

BoundsRun verify_bounds(const ScoringModel& model, const Dataset& ds, const Autoencoder* ae,
                        MethodPair pair, const BoundsConfig& cfg) {
    const bool manifold = pair == MethodPair::cchvae_vs_nae;
    if (manifold && ae == nullptr)
        throw std::invalid_argument("verify_bounds: cchvae_vs_nae needs an autoencoder");
    const bool linear_model = std::holds_alternative<LinearModel>(model);

    std::vector<std::size_t> eligible;
    for (auto idx : ds.split.test) {
        if (predict_label(model, ds.row(idx)) == 0) eligible.push_back(idx);
    }
    std::sort(eligible.begin(), eligible.end());
    if (cfg.max_instances > 0 && eligible.size() > cfg.max_instances)
        eligible.resize(cfg.max_instances);

    double L = 0.0;
    if (manifold)
        L = lipschitz_bound(ae->decoder, cfg.activation_lipschitz, cfg.lip_method, cfg.p).L;

    const Rng base(cfg.seed);
    std::vector<std::optional<BoundRecord>> slots(eligible.size());
    std::vector<std::string> skip_slots(eligible.size());

    parallel_for(eligible.size(), cfg.exec, [&](std::size_t i) {
        const std::size_t idx = eligible[i];
        const auto xr = ds.row(idx);
        const Vec x(xr.begin(), xr.end());
        try {
            BoundRecord rec;
            rec.instance_id = idx;
            rec.pair = pair;
            rec.p = cfg.p;

            if (!manifold) {
                const LinearModel lin = linear_model ? std::get<LinearModel>(model)
                                                     : to_linear(local_linearize(model, x));
                const double wn2 = dot(lin.w, lin.w);
                if (wn2 == 0.0) {
                    skip_slots[i] = "instance " + std::to_string(idx) + ": zero gradient";
                    return;
                }
                const double f = predict_logit(model, x);
                const double m = cfg.s - f;
                rec.lambda = cfg.lambda;
                rec.s = cfg.s;

                Vec xp_ce, xp_ae;
                if (pair == MethodPair::scfe_vs_cw) {
                    const double c = cfg.c ? *cfg.c : m / wn2;
                    if (c <= 0.0) {
                        skip_slots[i] =
                            "instance " + std::to_string(idx) + ": non-positive c";
                        return;
                    }
                    rec.c = c;
                    rec.bound = scfe_cw_bound(lin, x, cfg.s, cfg.lambda, c, cfg.p);
                    if (linear_model) {
                        const Vec d1 = scfe_closed_form(lin, x, cfg.s, cfg.lambda);
                        const Vec d2 = cw_closed_form(lin, x, c);
                        xp_ce.resize(x.size());
                        xp_ae.resize(x.size());
                        for (std::size_t j = 0; j < x.size(); ++j) {
                            xp_ce[j] = x[j] + d1[j];
                            xp_ae[j] = x[j] + d2[j];
                        }
                    } else {
                        ScfeParams sp = cfg.scfe;
                        sp.target_score = cfg.s;
                        sp.lambda_init = cfg.lambda;
                        sp.lambda_steps = 1;
                        xp_ce = scfe_iterative(model, x, sp).x_prime;
                        CwParams cp = cfg.cw;
                        cp.c = c;
                        xp_ae = cw_iterative(model, x, cp).x_prime;
                    }
                } else {
                    rec.bound = scfe_deepfool_bound(lin, x, cfg.s, cfg.lambda, cfg.p);
                    if (linear_model) {
                        const Vec d1 = scfe_closed_form(lin, x, cfg.s, cfg.lambda);
                        xp_ce.resize(x.size());
                        for (std::size_t j = 0; j < x.size(); ++j) xp_ce[j] = x[j] + d1[j];
                    } else {
                        ScfeParams sp = cfg.scfe;
                        sp.target_score = cfg.s;
                        sp.lambda_init = cfg.lambda;
                        sp.lambda_steps = 1;
                        xp_ce = scfe_iterative(model, x, sp).x_prime;
                    }
                    DeepFoolParams dp;
                    dp.overshoot = cfg.deepfool_eta;
                    xp_ae = deepfool(model, x, dp).x_prime;
                }
                Vec diff(x.size());
                for (std::size_t j = 0; j < x.size(); ++j) diff[j] = xp_ce[j] - xp_ae[j];
                rec.empirical = norm(diff, cfg.p);
            } else {
                LatentSearchParams lp = cfg.latent;
                lp.p = cfg.p;  // ball norm and comparison norm must agree
                lp.seed = base.derive(2 * idx).seed();
                const GenerationResult rc = cchvae_search(model, *ae, x, lp);
                lp.seed = base.derive(2 * idx + 1).seed();
                const GenerationResult rn = nae_search(model, *ae, x, lp);
                if (!rc.success || !rn.success) {
                    skip_slots[i] = "instance " + std::to_string(idx) + ": " +
                                    (rc.success ? "nae" : "cchvae") + " search exhausted";
                    return;
                }
                rec.L = L;
                rec.r_c = rc.radius_used;
                rec.r_nae = rn.radius_used;
                rec.bound = manifold_pair_bound(L, rc.radius_used, rn.radius_used);
                Vec diff(x.size());
                for (std::size_t j = 0; j < x.size(); ++j)
                    diff[j] = rc.x_prime[j] - rn.x_prime[j];
                rec.empirical = norm(diff, cfg.p);
            }

            rec.violated = rec.empirical > rec.bound + kViolationTol;
            slots[i] = rec;
        } catch (const std::exception& e) {
            skip_slots[i] = "instance " + std::to_string(idx) + ": " + e.what();
        }
    });

    BoundsRun run;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i]) {
            run.records.push_back(*slots[i]);
            run.violations += slots[i]->violated;
        } else {
            run.skips.push_back(skip_slots[i]);
        }
    }
    std::sort(run.records.begin(), run.records.end(),
              [](const BoundRecord& a, const BoundRecord& b) {
                  return a.instance_id < b.instance_id;
              });
    return run;
}

}  // namespace cfadv
