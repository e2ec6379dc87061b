#pragma once

#include "cfadv/counterfactuals.hpp"

namespace cfadv {

struct CwParams {
    double c = 1.0;
    bool clip_box = false;  // clamp x' to [0,1]^d after each step
    int max_steps = 1000;
    // Larger steps make Adam limit-cycle across the hinge without settling.
    double adam_lr = 0.01;
    double adam_lr_end = 1e-7;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    void validate() const;
};

// Binary margin loss from the hinge form: max(0, -2 f(x)).
double cw_loss_binary(const LinearModel& lin, const Vec& x);

// Stationary point of the active hinge branch: delta = c w. Requires the
// instance to be negatively predicted, where the branch applies.
Vec cw_closed_form(const LinearModel& lin, const Vec& x, double c);

// Adam on c * max(0, -2 f(x')) + ||x - x'||^2, hinge subgradient 0 on the
// flat side. success = verified label flip.
GenerationResult cw_iterative(const ScoringModel& model, const Vec& x, const CwParams& p);

struct DeepFoolParams {
    int max_iter = 50;
    double overshoot = 0.02;  // eta; final perturbation scaled by (1 + eta)

    void validate() const;
};

// Repeated closed-form steps to the linearized boundary; stops once the logit
// sign changes (landing exactly on 0 counts). The accumulated perturbation is
// scaled by (1 + eta).
GenerationResult deepfool(const ScoringModel& model, const Vec& x, const DeepFoolParams& p);

// Annulus search in latent space: round j draws from (j*dr, (j+1)*dr] with
// dr = params.r0; radius_used is the upper edge of the successful annulus.
GenerationResult nae_search(const ScoringModel& model, const Autoencoder& ae, const Vec& x,
                            const LatentSearchParams& p);

}  // namespace cfadv
