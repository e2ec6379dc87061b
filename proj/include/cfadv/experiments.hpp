#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfadv/bounds.hpp"
#include "cfadv/metrics.hpp"
#include "cfadv/serialize.hpp"

namespace cfadv {

// Bad or inconsistent configuration; the CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SyntheticSpec {
    std::size_t n = 5000;
    Vec mu1{1.0, 1.0};
    Vec mu2{-1.0, -1.0};
};

struct CsvSpec {
    std::string data_path;
    std::string schema_path;
};

struct AeSpec {
    std::vector<std::size_t> arch{2};  // hidden widths then latent dim
    bool linear = true;
    TrainConfig train;
};

struct MethodSettings {
    ScfeParams scfe;
    double scfe_cf_target = 0.0;
    std::optional<double> scfe_cf_lambda;  // unset: optimal-hyperparameter delta
    CwParams cw;                           // cw.c used only when cw_c_fixed set
    std::optional<double> cw_c_fixed;
    double cw_c_scale = 1.0;               // c = scale * (s - f) / ||w||^2, s = 0
    DeepFoolParams deepfool;
    LatentSearchParams cchvae;
    LatentSearchParams nae;                // r0 acts as the annulus width dr
};

struct BoundsSettings {
    std::vector<std::string> pairs{"scfe_vs_cw", "scfe_vs_deepfool", "cchvae_vs_nae"};
    NormOrder p = NormOrder::two;
    double s = 0.0;
    double lambda = 1.0;
    std::optional<double> c;
    double deepfool_eta = 0.0;
    std::string lipschitz = "width_weight_product";
    std::size_t max_instances = 0;
    bool assert_no_violations = false;
};

struct MetricsSettings {
    std::vector<double> thetas{0.02, 0.05, 0.1};
    std::vector<std::pair<std::string, std::string>> pairs{
        {"scfe", "cw"},    {"scfe", "deepfool"},   {"scfe", "nae"},
        {"cchvae", "cw"},  {"cchvae", "deepfool"}, {"cchvae", "nae"}};
};

struct ExperimentConfig {
    std::uint64_t seed = 7;
    std::string out_dir = "out";
    std::optional<SyntheticSpec> synthetic = SyntheticSpec{};
    std::optional<CsvSpec> csv;
    bool scale = false;
    double test_fraction = 0.2;
    std::string model_kind = "logistic";  // or "mlp"
    std::vector<std::size_t> hidden{18, 9, 3};
    TrainConfig train;
    std::optional<AeSpec> ae;
    MethodSettings methods;
    std::vector<std::string> generate_methods{"scfe", "deepfool"};
    BoundsSettings bounds;
    MetricsSettings metrics;
    Exec exec = default_exec();
    // File location overrides (--model); default <out>/model.json and
    // <out>/autoencoder.json. Locations only, not part of the config hash.
    std::optional<std::string> model_path;
    std::optional<std::string> ae_path;

    void validate() const;
};

json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const json& j);
// Fingerprint of the effective configuration; stamped into every output.
std::string config_hash(const ExperimentConfig& cfg);

// Dataset as the pipeline sees it: loaded or synthesized, optionally scaled,
// split with the derived seed.
Dataset prepare_dataset(const ExperimentConfig& cfg);

std::vector<std::size_t> negative_test_instances(const ScoringModel& model, const Dataset& ds);

// Runs one method over the given instances; independent derived RNG streams
// per instance keep results identical across execution policies.
std::vector<GenerationResult> generate_batch(const ScoringModel& model, const Autoencoder* ae,
                                             const Dataset& ds,
                                             const std::vector<std::size_t>& instances,
                                             const std::string& method,
                                             const ExperimentConfig& cfg, Exec exec);

// Subcommand bodies. All write into cfg.out_dir and return a process exit
// code (0 ok; 3 = bound violation under assert_no_violations).
int run_synth(const ExperimentConfig& cfg);
int run_train(const ExperimentConfig& cfg);
int run_generate(const ExperimentConfig& cfg);
int run_verify_bounds(const ExperimentConfig& cfg);
int run_metrics(const ExperimentConfig& cfg);

}  // namespace cfadv
