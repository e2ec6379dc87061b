#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfadv/experiments.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_vec(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

struct CliOptions {
    std::string config_path;
    std::string out;
    std::string data_path, schema_path, model_path;
    std::string methods, pairs, p;
    std::string mu1, mu2;
    long long seed = -1;
    long long n = -1;
    bool assert_no_violations = false;
};

void add_common(CLI::App* sub, CliOptions& opt) {
    sub->add_option("--config", opt.config_path, "experiment config JSON");
    sub->add_option("--seed", opt.seed, "global seed override");
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--data", opt.data_path, "dataset CSV path (with --schema)");
    sub->add_option("--schema", opt.schema_path, "feature schema JSON path");
    sub->add_option("--model", opt.model_path, "model JSON path override");
}

cfadv::ExperimentConfig build_config(const CliOptions& opt) {
    cfadv::json j = cfadv::json::object();
    if (!opt.config_path.empty()) {
        try {
            j = cfadv::read_json_file(opt.config_path);
        } catch (const std::exception& e) {
            throw cfadv::ConfigError(e.what());
        }
    }
    if (opt.seed >= 0) j["seed"] = static_cast<std::uint64_t>(opt.seed);
    if (!opt.out.empty()) j["out"] = opt.out;
    if (!opt.data_path.empty()) {
        if (opt.schema_path.empty())
            throw cfadv::ConfigError("--data requires --schema");
        j["data"] = cfadv::json{{"csv", {{"path", opt.data_path}, {"schema", opt.schema_path}}}};
    }
    if (opt.n >= 0) j["data"]["synthetic"]["n"] = static_cast<std::size_t>(opt.n);
    if (!opt.mu1.empty()) j["data"]["synthetic"]["mu1"] = parse_vec(opt.mu1);
    if (!opt.mu2.empty()) j["data"]["synthetic"]["mu2"] = parse_vec(opt.mu2);
    if (!opt.methods.empty()) j["generate"]["methods"] = split_list(opt.methods);
    if (!opt.pairs.empty()) j["bounds"]["pairs"] = split_list(opt.pairs);
    if (!opt.p.empty()) j["bounds"]["p"] = opt.p;
    if (opt.assert_no_violations) j["bounds"]["assert_no_violations"] = true;

    cfadv::ExperimentConfig cfg = cfadv::config_from_json(j);
    if (!opt.model_path.empty()) cfg.model_path = opt.model_path;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"counterfactual explanation / adversarial example generation "
                 "with closed forms, distance bounds and similarity metrics"};
    app.require_subcommand(1);
    CliOptions opt;

    auto* synth = app.add_subcommand("synth", "write a synthetic Gaussian-mixture dataset");
    add_common(synth, opt);
    synth->add_option("--n", opt.n, "number of samples");
    synth->add_option("--mu1", opt.mu1, "class-0 mean, comma separated");
    synth->add_option("--mu2", opt.mu2, "class-1 mean, comma separated");

    auto* train = app.add_subcommand("train", "train the classifier (and autoencoder)");
    add_common(train, opt);

    auto* generate = app.add_subcommand("generate", "generate counterfactuals/adversarials "
                                                    "for negatively predicted test instances");
    add_common(generate, opt);
    generate->add_option("--methods", opt.methods,
                         "comma list: scfe,scfe_cf,cw,cw_cf,deepfool,cchvae,nae");

    auto* verify = app.add_subcommand("verify-bounds", "evaluate theoretical bounds against "
                                                       "empirical differences");
    add_common(verify, opt);
    verify->add_option("--pairs", opt.pairs,
                       "comma list: scfe_vs_cw,scfe_vs_deepfool,cchvae_vs_nae");
    verify->add_option("--p", opt.p, "norm order: 1, 2 or inf");
    verify->add_flag("--assert-no-violations", opt.assert_no_violations,
                     "exit 3 if any bound is violated");

    auto* metrics = app.add_subcommand("metrics", "d_match and rank-correlation summary");
    add_common(metrics, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        const cfadv::ExperimentConfig cfg = build_config(opt);
        if (synth->parsed()) return cfadv::run_synth(cfg);
        if (train->parsed()) return cfadv::run_train(cfg);
        if (generate->parsed()) return cfadv::run_generate(cfg);
        if (verify->parsed()) return cfadv::run_verify_bounds(cfg);
        if (metrics->parsed()) return cfadv::run_metrics(cfg);
        return 1;
    } catch (const cfadv::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
