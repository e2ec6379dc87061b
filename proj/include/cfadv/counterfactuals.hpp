#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "cfadv/generative.hpp"
#include "cfadv/models.hpp"
#include "cfadv/rng.hpp"

namespace cfadv {

// One generated counterfactual or adversarial example. `success` means the
// method met its own contract: a verified label flip for the search methods,
// DeepFool and C&W, and target-score attainment for SCFE. delta == x_prime - x
// always holds exactly.
struct GenerationResult {
    std::size_t instance = 0;
    std::string method;
    Vec x;
    Vec x_prime;
    Vec delta;
    bool success = false;
    double radius_used = 0.0;                  // search methods
    int iterations = 0;                        // gradient methods
    std::map<std::string, std::string> params; // hyperparameter echo
};

GenerationResult make_result(std::string method, const Vec& x, Vec x_prime);

struct ScfeParams {
    double target_score = 0.0;   // s
    double lambda_init = 0.01;
    double lambda_growth = 2.0;  // schedule multiplies lambda until tolerance or budget
    int lambda_steps = 20;
    double score_tol = 1e-4;     // eps_s
    int adam_steps = 1000;
    double adam_lr = 0.05;
    double adam_lr_end = 1e-7;   // geometric decay over the inner run
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    void validate() const;
};

// Ridge closed form: solves (w w^T + lambda I) delta = m w with
// m = s - f(x). Algebraically equal to m w / (lambda + ||w||^2); the solve is
// kept as the canonical route and the scalar identity is checked in tests.
Vec scfe_closed_form(const LinearModel& lin, const Vec& x, double s, double lambda);

// Optimal-hyperparameter limit: delta = (m / ||w||^2) w, which attains
// f(x + delta) = s exactly.
Vec scfe_optimal_delta(const LinearModel& lin, const Vec& x, double s);

// The lambda value that makes the scheduled objective self-consistent at the
// target; can be negative when ||w||^2 < 1 and is never used as a default.
double scfe_lambda_star(const LinearModel& lin);

// Adam minimization of (f(x') - s)^2 + lambda ||x' - x||^2 from x' = x,
// re-run over the lambda schedule until |f(x') - s| <= eps_s or the budget
// runs out. success = score tolerance met.
GenerationResult scfe_iterative(const ScoringModel& model, const Vec& x, const ScfeParams& p);

struct LatentSearchParams {
    double r0 = 0.1;          // initial ball radius; annulus width for NAE
    double growth = 1.5;
    int samples = 32;
    int max_rounds = 30;
    NormOrder p = NormOrder::two;
    std::uint64_t seed = 0;
    std::vector<std::size_t> protected_idx;  // feature coordinates frozen to x

    void validate() const;
};

// Ball search in the autoencoder's latent space: rounds of `samples` uniform
// draws in the l_p ball, radius growing geometrically; first round with a
// flip wins and the smallest-norm flipping draw is returned.
GenerationResult cchvae_search(const ScoringModel& model, const Autoencoder& ae, const Vec& x,
                               const LatentSearchParams& p);

// Uniform draw from the l_p ball of radius r (direction from the matching
// generalized Gaussian, scaled so volume is uniform), and from the annulus
// (r_lo, r_hi].
Vec sample_lp_ball(Rng& rng, std::size_t k, NormOrder p, double r);
Vec sample_lp_annulus(Rng& rng, std::size_t k, NormOrder p, double r_lo, double r_hi);

}  // namespace cfadv
