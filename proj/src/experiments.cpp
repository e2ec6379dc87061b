#include "cfadv/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>

#include "cfadv/ioutil.hpp"
#include "cfadv/svg.hpp"

namespace cfadv {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kAllMethods{"scfe",     "scfe_cf", "cw",  "cw_cf",
                                           "deepfool", "cchvae",  "nae"};

std::uint64_t method_tag(const std::string& method) {
    const auto it = std::find(kAllMethods.begin(), kAllMethods.end(), method);
    if (it == kAllMethods.end()) throw ConfigError("unknown method '" + method + "'");
    return static_cast<std::uint64_t>(it - kAllMethods.begin());
}

bool is_latent_method(const std::string& m) { return m == "cchvae" || m == "nae"; }

// Sub-seed tags for the pipeline stages.
enum SeedTag : std::uint64_t { kSeedData = 0, kSeedSplit, kSeedTrain, kSeedAe, kSeedGen, kSeedBounds };

std::uint64_t derived_seed(const ExperimentConfig& cfg, std::uint64_t tag) {
    return Rng(cfg.seed).derive(tag).seed();
}

json train_to_json(const TrainConfig& t) {
    return json{{"batch_size", t.batch_size}, {"epochs", t.epochs},
                {"learning_rate", t.learning_rate}, {"beta1", t.beta1},
                {"beta2", t.beta2}, {"eps", t.eps}};
}

TrainConfig train_from_json(const json& j, TrainConfig t = {}) {
    t.batch_size = j.value("batch_size", t.batch_size);
    t.epochs = j.value("epochs", t.epochs);
    t.learning_rate = j.value("learning_rate", t.learning_rate);
    t.beta1 = j.value("beta1", t.beta1);
    t.beta2 = j.value("beta2", t.beta2);
    t.eps = j.value("eps", t.eps);
    return t;
}

json latent_to_json(const LatentSearchParams& p, bool annulus) {
    json j{{annulus ? "dr" : "r0", p.r0}, {"samples", p.samples},
           {"max_rounds", p.max_rounds}, {"p", to_string(p.p)}};
    if (!annulus) {
        j["growth"] = p.growth;
        j["protected"] = p.protected_idx;
    }
    return j;
}

LatentSearchParams latent_from_json(const json& j, bool annulus, LatentSearchParams p = {}) {
    p.r0 = j.value(annulus ? "dr" : "r0", p.r0);
    if (!annulus) p.growth = j.value("growth", p.growth);
    p.samples = j.value("samples", p.samples);
    p.max_rounds = j.value("max_rounds", p.max_rounds);
    if (j.contains("p")) p.p = norm_order_from_string(j.at("p").get<std::string>());
    if (!annulus && j.contains("protected"))
        p.protected_idx = j.at("protected").get<std::vector<std::size_t>>();
    return p;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (synthetic.has_value() == csv.has_value())
        throw ConfigError("config: exactly one of data.synthetic / data.csv required");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ConfigError("config: test_fraction must be in (0,1)");
    if (model_kind != "logistic" && model_kind != "mlp")
        throw ConfigError("config: model kind must be 'logistic' or 'mlp'");
    try {
        train.validate();
        if (ae) ae->train.validate();
        methods.scfe.validate();
        methods.cchvae.validate();
        methods.deepfool.validate();
        if (methods.cw_c_fixed && *methods.cw_c_fixed <= 0.0)
            throw std::invalid_argument("cw: fixed c must be positive");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (const auto& m : generate_methods) method_tag(m);
    for (const auto& p : bounds.pairs) method_pair_from_string(p);
    lipschitz_method_from_string(bounds.lipschitz);
}

json config_to_json(const ExperimentConfig& cfg) {
    json data;
    if (cfg.synthetic) {
        data["synthetic"] = json{{"n", cfg.synthetic->n}, {"mu1", cfg.synthetic->mu1},
                                 {"mu2", cfg.synthetic->mu2}};
    } else if (cfg.csv) {
        data["csv"] = json{{"path", cfg.csv->data_path}, {"schema", cfg.csv->schema_path}};
    }
    const auto& ms = cfg.methods;
    json methods;
    methods["scfe"] = json{{"target_score", ms.scfe.target_score},
                           {"lambda_init", ms.scfe.lambda_init},
                           {"lambda_growth", ms.scfe.lambda_growth},
                           {"lambda_steps", ms.scfe.lambda_steps},
                           {"score_tol", ms.scfe.score_tol},
                           {"adam_steps", ms.scfe.adam_steps},
                           {"adam_lr", ms.scfe.adam_lr},
                           {"adam_lr_end", ms.scfe.adam_lr_end}};
    methods["scfe_cf"] = json{{"target_score", ms.scfe_cf_target},
                              {"lambda", ms.scfe_cf_lambda ? json(*ms.scfe_cf_lambda) : json()}};
    methods["cw"] = json{{"c", ms.cw_c_fixed ? json(*ms.cw_c_fixed) : json()},
                         {"c_scale", ms.cw_c_scale},
                         {"clip_box", ms.cw.clip_box},
                         {"max_steps", ms.cw.max_steps},
                         {"adam_lr", ms.cw.adam_lr},
                         {"adam_lr_end", ms.cw.adam_lr_end}};
    methods["deepfool"] = json{{"max_iter", ms.deepfool.max_iter},
                               {"overshoot", ms.deepfool.overshoot}};
    methods["cchvae"] = latent_to_json(ms.cchvae, false);
    methods["nae"] = latent_to_json(ms.nae, true);

    json model{{"kind", cfg.model_kind}, {"hidden", cfg.hidden}, {"train", train_to_json(cfg.train)}};
    json j{{"seed", cfg.seed},
           {"out", cfg.out_dir},
           {"data", data},
           {"scale", cfg.scale},
           {"test_fraction", cfg.test_fraction},
           {"model", model},
           {"methods", methods},
           {"generate", json{{"methods", cfg.generate_methods}}},
           {"bounds", json{{"pairs", cfg.bounds.pairs},
                           {"p", to_string(cfg.bounds.p)},
                           {"s", cfg.bounds.s},
                           {"lambda", cfg.bounds.lambda},
                           {"c", cfg.bounds.c ? json(*cfg.bounds.c) : json()},
                           {"deepfool_eta", cfg.bounds.deepfool_eta},
                           {"lipschitz", cfg.bounds.lipschitz},
                           {"max_instances", cfg.bounds.max_instances},
                           {"assert_no_violations", cfg.bounds.assert_no_violations}}},
           {"metrics", json{{"thetas", cfg.metrics.thetas}, {"pairs", cfg.metrics.pairs}}}};
    if (cfg.ae) {
        j["autoencoder"] = json{{"arch", cfg.ae->arch}, {"linear", cfg.ae->linear},
                                {"train", train_to_json(cfg.ae->train)}};
    } else {
        j["autoencoder"] = json();
    }
    return j;
}

namespace {
ExperimentConfig config_from_json_impl(const json& j);
}

ExperimentConfig config_from_json(const json& j) {
    try {
        return config_from_json_impl(j);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        // malformed values (wrong types, unknown enum strings) are config errors
        throw ConfigError(std::string("config: ") + e.what());
    }
}

namespace {

ExperimentConfig config_from_json_impl(const json& j) {
    ExperimentConfig cfg;
    cfg.seed = j.value("seed", cfg.seed);
    cfg.out_dir = j.value("out", cfg.out_dir);
    if (j.contains("data")) {
        const auto& data = j.at("data");
        if (data.contains("synthetic")) {
            SyntheticSpec s;
            const auto& js = data.at("synthetic");
            s.n = js.value("n", s.n);
            if (js.contains("mu1")) s.mu1 = js.at("mu1").get<Vec>();
            if (js.contains("mu2")) s.mu2 = js.at("mu2").get<Vec>();
            cfg.synthetic = s;
            cfg.csv.reset();
        } else if (data.contains("csv")) {
            CsvSpec c;
            c.data_path = data.at("csv").at("path").get<std::string>();
            c.schema_path = data.at("csv").at("schema").get<std::string>();
            cfg.csv = c;
            cfg.synthetic.reset();
        }
    }
    cfg.scale = j.value("scale", cfg.scale);
    cfg.test_fraction = j.value("test_fraction", cfg.test_fraction);
    if (j.contains("model")) {
        const auto& jm = j.at("model");
        cfg.model_kind = jm.value("kind", cfg.model_kind);
        if (jm.contains("hidden")) cfg.hidden = jm.at("hidden").get<std::vector<std::size_t>>();
        if (jm.contains("train")) cfg.train = train_from_json(jm.at("train"), cfg.train);
    }
    if (j.contains("autoencoder") && !j.at("autoencoder").is_null()) {
        AeSpec ae;
        const auto& ja = j.at("autoencoder");
        if (ja.contains("arch")) ae.arch = ja.at("arch").get<std::vector<std::size_t>>();
        ae.linear = ja.value("linear", ae.linear);
        if (ja.contains("train")) ae.train = train_from_json(ja.at("train"), ae.train);
        cfg.ae = ae;
    } else if (j.contains("autoencoder")) {
        cfg.ae.reset();
    }
    if (j.contains("methods")) {
        const auto& jm = j.at("methods");
        auto& ms = cfg.methods;
        if (jm.contains("scfe")) {
            const auto& js = jm.at("scfe");
            ms.scfe.target_score = js.value("target_score", ms.scfe.target_score);
            ms.scfe.lambda_init = js.value("lambda_init", ms.scfe.lambda_init);
            ms.scfe.lambda_growth = js.value("lambda_growth", ms.scfe.lambda_growth);
            ms.scfe.lambda_steps = js.value("lambda_steps", ms.scfe.lambda_steps);
            ms.scfe.score_tol = js.value("score_tol", ms.scfe.score_tol);
            ms.scfe.adam_steps = js.value("adam_steps", ms.scfe.adam_steps);
            ms.scfe.adam_lr = js.value("adam_lr", ms.scfe.adam_lr);
            ms.scfe.adam_lr_end = js.value("adam_lr_end", ms.scfe.adam_lr_end);
        }
        if (jm.contains("scfe_cf")) {
            const auto& js = jm.at("scfe_cf");
            ms.scfe_cf_target = js.value("target_score", ms.scfe_cf_target);
            if (js.contains("lambda") && !js.at("lambda").is_null())
                ms.scfe_cf_lambda = js.at("lambda").get<double>();
        }
        if (jm.contains("cw")) {
            const auto& js = jm.at("cw");
            if (js.contains("c") && !js.at("c").is_null())
                ms.cw_c_fixed = js.at("c").get<double>();
            ms.cw_c_scale = js.value("c_scale", ms.cw_c_scale);
            ms.cw.clip_box = js.value("clip_box", ms.cw.clip_box);
            ms.cw.max_steps = js.value("max_steps", ms.cw.max_steps);
            ms.cw.adam_lr = js.value("adam_lr", ms.cw.adam_lr);
            ms.cw.adam_lr_end = js.value("adam_lr_end", ms.cw.adam_lr_end);
        }
        if (jm.contains("deepfool")) {
            const auto& js = jm.at("deepfool");
            ms.deepfool.max_iter = js.value("max_iter", ms.deepfool.max_iter);
            ms.deepfool.overshoot = js.value("overshoot", ms.deepfool.overshoot);
        }
        if (jm.contains("cchvae")) ms.cchvae = latent_from_json(jm.at("cchvae"), false, ms.cchvae);
        if (jm.contains("nae")) ms.nae = latent_from_json(jm.at("nae"), true, ms.nae);
    }
    if (j.contains("generate") && j.at("generate").contains("methods"))
        cfg.generate_methods = j.at("generate").at("methods").get<std::vector<std::string>>();
    if (j.contains("bounds")) {
        const auto& jb = j.at("bounds");
        auto& b = cfg.bounds;
        if (jb.contains("pairs")) b.pairs = jb.at("pairs").get<std::vector<std::string>>();
        if (jb.contains("p")) b.p = norm_order_from_string(jb.at("p").get<std::string>());
        b.s = jb.value("s", b.s);
        b.lambda = jb.value("lambda", b.lambda);
        if (jb.contains("c") && !jb.at("c").is_null()) b.c = jb.at("c").get<double>();
        b.deepfool_eta = jb.value("deepfool_eta", b.deepfool_eta);
        b.lipschitz = jb.value("lipschitz", b.lipschitz);
        b.max_instances = jb.value("max_instances", b.max_instances);
        b.assert_no_violations = jb.value("assert_no_violations", b.assert_no_violations);
    }
    if (j.contains("metrics")) {
        const auto& jm = j.at("metrics");
        if (jm.contains("thetas")) cfg.metrics.thetas = jm.at("thetas").get<std::vector<double>>();
        if (jm.contains("pairs"))
            cfg.metrics.pairs =
                jm.at("pairs").get<std::vector<std::pair<std::string, std::string>>>();
    }
    cfg.validate();
    return cfg;
}

}  // namespace

std::string config_hash(const ExperimentConfig& cfg) {
    // Fingerprints the experiment, not where it is written: the same
    // config into two directories produces byte-identical files.
    json j = config_to_json(cfg);
    j.erase("out");
    return hex64(fnv1a64(j.dump()));
}

Dataset prepare_dataset(const ExperimentConfig& cfg) {
    Dataset ds;
    if (cfg.synthetic) {
        ds = gen_gaussian_mixture(cfg.synthetic->n, cfg.synthetic->mu1, cfg.synthetic->mu2,
                                  derived_seed(cfg, kSeedData));
    } else {
        const FeatureSchema schema = schema_from_json(read_json_file(cfg.csv->schema_path));
        ds = load_csv(cfg.csv->data_path, schema);
    }
    if (cfg.scale) ds = scale_minmax(ds);
    return train_test_split(ds, cfg.test_fraction, derived_seed(cfg, kSeedSplit));
}

std::vector<std::size_t> negative_test_instances(const ScoringModel& model, const Dataset& ds) {
    std::vector<std::size_t> out;
    for (auto idx : ds.split.test)
        if (predict_label(model, ds.row(idx)) == 0) out.push_back(idx);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Per-instance c for the C&W runs: scale * (0 - f(x)) / ||grad f(x)||^2.
std::optional<double> resolve_cw_c(const ScoringModel& model, const Vec& x,
                                   const MethodSettings& ms) {
    if (ms.cw_c_fixed) return *ms.cw_c_fixed;
    const Vec w = input_gradient(model, x);
    const double wn2 = dot(w, w);
    if (wn2 == 0.0) return std::nullopt;
    const double c = ms.cw_c_scale * (-predict_logit(model, x)) / wn2;
    if (c <= 0.0) return std::nullopt;
    return c;
}

GenerationResult failed_result(const std::string& method, const Vec& x, const std::string& why) {
    GenerationResult r = make_result(method, x, x);
    r.success = false;
    r.params["note"] = why;
    return r;
}

}  // namespace

std::vector<GenerationResult> generate_batch(const ScoringModel& model, const Autoencoder* ae,
                                             const Dataset& ds,
                                             const std::vector<std::size_t>& instances,
                                             const std::string& method,
                                             const ExperimentConfig& cfg, Exec exec) {
    if (is_latent_method(method) && ae == nullptr)
        throw ConfigError("method '" + method + "' needs an autoencoder");
    const auto& ms = cfg.methods;
    const Rng method_rng = Rng(cfg.seed).derive(kSeedGen).derive(method_tag(method));

    std::vector<GenerationResult> results(instances.size());
    parallel_for(instances.size(), exec, [&](std::size_t i) {
        const std::size_t idx = instances[i];
        const auto xr = ds.row(idx);
        const Vec x(xr.begin(), xr.end());
        GenerationResult r;
        try {
            if (method == "scfe") {
                r = scfe_iterative(model, x, ms.scfe);
            } else if (method == "scfe_cf") {
                const LinearModel lin = std::holds_alternative<LinearModel>(model)
                                            ? std::get<LinearModel>(model)
                                            : to_linear(local_linearize(model, x));
                const Vec delta = ms.scfe_cf_lambda
                                      ? scfe_closed_form(lin, x, ms.scfe_cf_target,
                                                         *ms.scfe_cf_lambda)
                                      : scfe_optimal_delta(lin, x, ms.scfe_cf_target);
                Vec xp(x.size());
                for (std::size_t k = 0; k < x.size(); ++k) xp[k] = x[k] + delta[k];
                r = make_result("scfe_cf", x, std::move(xp));
                // Same success notion as the iterative SCFE: target score hit.
                r.success = std::abs(predict_logit(model, r.x_prime) - ms.scfe_cf_target) <=
                            ms.scfe.score_tol;
                r.params["s"] = format_g17(ms.scfe_cf_target);
                r.params["lambda"] =
                    ms.scfe_cf_lambda ? format_g17(*ms.scfe_cf_lambda) : "optimal";
            } else if (method == "cw" || method == "cw_cf") {
                const auto c = resolve_cw_c(model, x, ms);
                if (!c) {
                    r = failed_result(method, x, "no usable c (zero gradient or f >= 0)");
                } else if (method == "cw") {
                    CwParams p = ms.cw;
                    p.c = *c;
                    r = cw_iterative(model, x, p);
                } else {
                    const LinearModel lin = std::holds_alternative<LinearModel>(model)
                                                ? std::get<LinearModel>(model)
                                                : to_linear(local_linearize(model, x));
                    const Vec delta = cw_closed_form(lin, x, *c);
                    Vec xp(x.size());
                    for (std::size_t k = 0; k < x.size(); ++k) xp[k] = x[k] + delta[k];
                    r = make_result("cw_cf", x, std::move(xp));
                    r.success = predict_label(model, r.x_prime) != predict_label(model, x);
                    r.params["c"] = format_g17(*c);
                }
            } else if (method == "deepfool") {
                r = deepfool(model, x, ms.deepfool);
            } else if (method == "cchvae") {
                LatentSearchParams p = ms.cchvae;
                p.seed = method_rng.derive(idx).seed();
                r = cchvae_search(model, *ae, x, p);
            } else if (method == "nae") {
                LatentSearchParams p = ms.nae;
                p.seed = method_rng.derive(idx).seed();
                r = nae_search(model, *ae, x, p);
            } else {
                throw ConfigError("unknown method '" + method + "'");
            }
        } catch (const std::exception& e) {
            r = failed_result(method, x, e.what());
        }
        r.instance = idx;
        results[i] = std::move(r);
    });
    return results;
}

namespace {

std::string meta_line(const ExperimentConfig& cfg) {
    return "config_hash=" + config_hash(cfg) + " seed=" + std::to_string(cfg.seed);
}

void stamp(json& j, const ExperimentConfig& cfg) {
    j["config_hash"] = config_hash(cfg);
    j["seed"] = cfg.seed;
}

fs::path out_path(const ExperimentConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    return fs::path(cfg.out_dir) / name;
}

ScoringModel load_model(const ExperimentConfig& cfg) {
    const fs::path p =
        cfg.model_path ? fs::path(*cfg.model_path) : fs::path(cfg.out_dir) / "model.json";
    if (!fs::exists(p))
        throw ConfigError("missing model file '" + p.string() + "' (run `train` first)");
    return model_from_json(read_json_file(p.string()));
}

std::optional<Autoencoder> load_autoencoder_if_present(const ExperimentConfig& cfg) {
    const fs::path p =
        cfg.ae_path ? fs::path(*cfg.ae_path) : fs::path(cfg.out_dir) / "autoencoder.json";
    if (!fs::exists(p)) return std::nullopt;
    return autoencoder_from_json(read_json_file(p.string()));
}

json five_to_json(const FiveNumber& f) {
    return json{{"min", f.min}, {"q1", f.q1}, {"median", f.median}, {"q3", f.q3}, {"max", f.max}};
}

}  // namespace

int run_synth(const ExperimentConfig& cfg) {
    if (!cfg.synthetic) throw ConfigError("synth: config has no synthetic data section");
    const Dataset ds = gen_gaussian_mixture(cfg.synthetic->n, cfg.synthetic->mu1,
                                            cfg.synthetic->mu2, derived_seed(cfg, kSeedData));
    save_csv(ds, out_path(cfg, "data.csv").string(), meta_line(cfg));
    json js = schema_to_json(ds.schema);
    stamp(js, cfg);
    write_json_file(out_path(cfg, "schema.json").string(), js);
    std::cout << "wrote " << ds.n() << " rows x " << ds.dim() << " features to "
              << out_path(cfg, "data.csv").string() << "\n";
    return 0;
}

int run_train(const ExperimentConfig& cfg) {
    Dataset ds = prepare_dataset(cfg);

    TrainConfig tc = cfg.train;
    tc.seed = derived_seed(cfg, kSeedTrain);
    TrainStats stats;
    ScoringModel model;
    if (cfg.model_kind == "logistic") {
        model = train_logistic(ds, tc, &stats);
    } else {
        model = train_mlp(ds, cfg.hidden, tc, &stats);
    }
    json jm = model_to_json(model);
    stamp(jm, cfg);
    write_json_file(out_path(cfg, "model.json").string(), jm);

    json sidecar{{"model_kind", cfg.model_kind},
                 {"train_accuracy", accuracy(model, ds, ds.split.train)},
                 {"test_accuracy", accuracy(model, ds, ds.split.test)},
                 {"loss_initial", stats.loss_initial},
                 {"loss_final", stats.loss_final}};

    if (cfg.ae) {
        TrainConfig ac = cfg.ae->train;
        ac.seed = derived_seed(cfg, kSeedAe);
        TrainStats ae_stats;
        const Autoencoder ae = train_autoencoder(ds, cfg.ae->arch, ac, cfg.ae->linear, &ae_stats);
        json ja = autoencoder_to_json(ae);
        stamp(ja, cfg);
        write_json_file(out_path(cfg, "autoencoder.json").string(), ja);
        sidecar["ae_loss_initial"] = ae_stats.loss_initial;
        sidecar["ae_loss_final"] = ae_stats.loss_final;
    }
    stamp(sidecar, cfg);
    write_json_file(out_path(cfg, "train_metrics.json").string(), sidecar);
    std::cout << "test accuracy " << sidecar["test_accuracy"] << "\n";
    return 0;
}

int run_generate(const ExperimentConfig& cfg) {
    const Dataset ds = prepare_dataset(cfg);
    const ScoringModel model = load_model(cfg);
    const auto ae = load_autoencoder_if_present(cfg);
    for (const auto& m : cfg.generate_methods) {
        if (is_latent_method(m) && !ae)
            throw ConfigError("method '" + m + "' requires an autoencoder file (train with an "
                              "autoencoder section)");
    }
    const auto eligible = negative_test_instances(model, ds);
    if (eligible.empty())
        std::cerr << "warning: no negatively predicted test instances; results are empty\n";

    for (const auto& m : cfg.generate_methods) {
        const auto results =
            generate_batch(model, ae ? &*ae : nullptr, ds, eligible, m, cfg, cfg.exec);
        write_results_jsonl(results, out_path(cfg, "results_" + m + ".jsonl").string(),
                            meta_line(cfg));
        std::size_t ok = 0;
        for (const auto& r : results) ok += r.success;
        std::cout << m << ": " << ok << "/" << results.size() << " succeeded\n";
    }
    return 0;
}

int run_verify_bounds(const ExperimentConfig& cfg) {
    const Dataset ds = prepare_dataset(cfg);
    const ScoringModel model = load_model(cfg);
    const auto ae = load_autoencoder_if_present(cfg);

    BoundsConfig bc;
    bc.p = cfg.bounds.p;
    bc.s = cfg.bounds.s;
    bc.lambda = cfg.bounds.lambda;
    bc.c = cfg.bounds.c;
    bc.deepfool_eta = cfg.bounds.deepfool_eta;
    bc.latent = cfg.methods.cchvae;
    bc.lip_method = lipschitz_method_from_string(cfg.bounds.lipschitz);
    bc.scfe = cfg.methods.scfe;
    bc.cw = cfg.methods.cw;
    bc.seed = derived_seed(cfg, kSeedBounds);
    bc.max_instances = cfg.bounds.max_instances;
    bc.exec = cfg.exec;

    std::vector<BoundRecord> all_records;
    std::vector<BoxGroup> boxes;
    json summary;
    std::size_t total_violations = 0;
    for (const auto& pair_name : cfg.bounds.pairs) {
        const MethodPair pair = method_pair_from_string(pair_name);
        if (pair == MethodPair::cchvae_vs_nae && !ae)
            throw ConfigError("pair cchvae_vs_nae requires an autoencoder file");
        const BoundsRun run = verify_bounds(model, ds, ae ? &*ae : nullptr, pair, bc);
        for (const auto& reason : run.skips) std::cerr << "skip: " << reason << "\n";

        BoxGroup box;
        box.label = pair_name;
        json jp{{"count", run.records.size()},
                {"skipped", run.skips.size()},
                {"violations", run.violations},
                {"p", to_string(bc.p)},
                {"lambda", bc.lambda},
                {"s", bc.s},
                {"c_mode", bc.c ? format_g17(*bc.c) : "per_instance"}};
        if (!run.records.empty()) {
            std::vector<double> emp, bnd;
            for (const auto& r : run.records) {
                emp.push_back(r.empirical);
                bnd.push_back(r.bound);
            }
            jp["empirical"] = five_to_json(five_number_summary(emp));
            jp["bound"] = five_to_json(five_number_summary(bnd));
            box.empirical = std::move(emp);
            box.bound = std::move(bnd);
        }
        if (pair == MethodPair::cchvae_vs_nae && !run.records.empty())
            jp["L"] = run.records.front().L;
        summary["pairs"][pair_name] = jp;
        boxes.push_back(std::move(box));
        total_violations += run.violations;
        all_records.insert(all_records.end(), run.records.begin(), run.records.end());
        std::cout << pair_name << ": " << run.records.size() << " records, " << run.violations
                  << " violations, " << run.skips.size() << " skipped\n";
    }
    summary["total_violations"] = total_violations;
    stamp(summary, cfg);

    write_bounds_csv(all_records, out_path(cfg, "bounds.csv").string(), meta_line(cfg));
    write_json_file(out_path(cfg, "bounds_summary.json").string(), summary);
    write_boxplot_svg(out_path(cfg, "bounds.svg").string(),
                      "Empirical differences vs theoretical bounds", boxes, meta_line(cfg));

    if (cfg.bounds.assert_no_violations && total_violations > 0) {
        std::cerr << "bound violations detected: " << total_violations << "\n";
        return 3;
    }
    return 0;
}

int run_metrics(const ExperimentConfig& cfg) {
    std::set<std::string> needed;
    for (const auto& [ce, ae_m] : cfg.metrics.pairs) {
        needed.insert(ce);
        needed.insert(ae_m);
    }
    // Use generation outputs when present; otherwise generate in place with
    // the same derived seeds (byte-identical to what `generate` would write).
    std::map<std::string, std::vector<GenerationResult>> results;
    std::optional<Dataset> ds;
    std::optional<ScoringModel> model;
    std::optional<Autoencoder> ae;
    for (const auto& m : needed) {
        const fs::path p = fs::path(cfg.out_dir) / ("results_" + m + ".jsonl");
        if (fs::exists(p)) {
            results[m] = read_results_jsonl(p.string());
            continue;
        }
        if (!model) {
            ds = prepare_dataset(cfg);
            model = load_model(cfg);
            ae = load_autoencoder_if_present(cfg);
        }
        if (is_latent_method(m) && !ae)
            throw ConfigError("method '" + m + "' requires an autoencoder file");
        const auto eligible = negative_test_instances(*model, *ds);
        results[m] =
            generate_batch(*model, ae ? &*ae : nullptr, *ds, eligible, m, cfg, cfg.exec);
    }

    MatchConfig mc;
    mc.thetas = cfg.metrics.thetas;
    json summary;
    summary["pairs"] = json::array();
    std::vector<BarGroup> bars;
    for (const auto& [ce_m, ae_m] : cfg.metrics.pairs) {
        const auto rep = pairwise_report(results.at(ce_m), results.at(ae_m), mc);
        json jp{{"pair", ce_m + " vs " + ae_m},
                {"n", rep.n_pairs},
                {"skipped", rep.skipped},
                {"rho_n", rep.rhos.size()},
                {"rho_skipped", rep.rho_skipped},
                {"rho_mean", rep.rho_mean},
                {"rho_std", rep.rho_std}};
        json jd;
        BarGroup bar;
        bar.label = ce_m + " vs " + ae_m;
        for (const auto& [theta, value] : rep.dmatch) {
            char key[32];
            std::snprintf(key, sizeof key, "%g", theta);
            jd[key] = value;
            bar.bars.emplace_back(theta, value);
        }
        jp["d_match"] = jd;
        summary["pairs"].push_back(jp);
        bars.push_back(std::move(bar));
        std::cout << ce_m << " vs " << ae_m << ": n=" << rep.n_pairs
                  << " rho_mean=" << rep.rho_mean << "\n";
    }
    stamp(summary, cfg);
    write_json_file(out_path(cfg, "metrics_summary.json").string(), summary);
    write_barchart_svg(out_path(cfg, "dmatch.svg").string(), "d_match by method pair", bars,
                       meta_line(cfg));
    return 0;
}

}  // namespace cfadv
