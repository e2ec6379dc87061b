#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cfadv/adversarial.hpp"
#include "cfadv/counterfactuals.hpp"
#include "cfadv/parallel.hpp"

namespace cfadv {

enum class MethodPair { scfe_vs_cw, scfe_vs_deepfool, cchvae_vs_nae };

std::string to_string(MethodPair pair);
MethodPair method_pair_from_string(const std::string& s);

constexpr double kViolationTol = 1e-9;

struct BoundRecord {
    std::size_t instance_id = 0;
    MethodPair pair = MethodPair::scfe_vs_cw;
    NormOrder p = NormOrder::two;
    double empirical = 0.0;
    double bound = 0.0;
    bool violated = false;
    // Hyperparameters actually used; NaN where not applicable to the pair.
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double c = std::numeric_limits<double>::quiet_NaN();
    double s = std::numeric_limits<double>::quiet_NaN();
    double L = std::numeric_limits<double>::quiet_NaN();
    double r_c = std::numeric_limits<double>::quiet_NaN();
    double r_nae = std::numeric_limits<double>::quiet_NaN();
};

// ||(m/lambda)(I - w w^T / (lambda + ||w||^2)) - c I||_p * ||w||_p with the
// induced operator norm; p=2 uses the symmetric eigenvalue route.
double scfe_cw_bound(const LinearModel& lin, const Vec& x, double s, double lambda, double c,
                  NormOrder p);

// Same with + (f(x)/||w||^2) I in place of -c I.
double scfe_deepfool_bound(const LinearModel& lin, const Vec& x, double s, double lambda, NormOrder p);

double manifold_pair_bound(double L, double r_c, double r_nae);

struct BoundsConfig {
    NormOrder p = NormOrder::two;
    double s = 0.0;
    double lambda = 1.0;
    std::optional<double> c;   // per-instance (s - f(x)) / ||w||^2 when unset
    double deepfool_eta = 0.0;
    // Manifold pair.
    LatentSearchParams latent;
    LipschitzMethod lip_method = LipschitzMethod::width_weight_product;
    double activation_lipschitz = 1.0;
    // Iterative generators (used when the model is nonlinear).
    ScfeParams scfe;
    CwParams cw;

    std::uint64_t seed = 0;
    std::size_t max_instances = 0;  // 0 = every eligible instance
    Exec exec = default_exec();
};

struct BoundsRun {
    std::vector<BoundRecord> records;    // sorted by instance id
    std::vector<std::string> skips;      // one reason per skipped instance
    std::size_t violations = 0;
};

// Evaluates the configured pair over the negatively predicted test instances.
// For nonlinear models the bounds use the local linearization at x and the
// empirical side comes from the iterative generators; violations are then
// reported rather than impossible.
BoundsRun verify_bounds(const ScoringModel& model, const Dataset& ds, const Autoencoder* ae,
                        MethodPair pair, const BoundsConfig& cfg);

}  // namespace cfadv
