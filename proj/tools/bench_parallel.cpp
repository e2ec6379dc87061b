// Times the per-instance generation and bound-verification loops under the
// serial reference and the OpenMP policy, and checks that both produce the
// same records.

#include <chrono>
#include <cstdio>
#include <string>

#include "cfadv/experiments.hpp"

using namespace cfadv;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return seconds_since(t0);
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n = 20000;
    if (argc > 1) n = static_cast<std::size_t>(std::stoul(argv[1]));

    ExperimentConfig cfg;
    cfg.synthetic = SyntheticSpec{n, {1.0, 1.0}, {-1.0, -1.0}};
    cfg.methods.scfe.lambda_init = 1e-4;
    cfg.methods.scfe.lambda_steps = 1;
    cfg.methods.scfe.adam_steps = 400;

    const Dataset ds = prepare_dataset(cfg);
    TrainConfig tc;
    tc.epochs = 5;
    tc.seed = 11;
    const ScoringModel model = train_logistic(ds, tc);
    const Autoencoder ae = identity_autoencoder(ds.dim());
    const auto instances = negative_test_instances(model, ds);

    std::printf("instances: %zu, threads: %d\n", instances.size(), max_threads());
    std::printf("%-14s %10s %10s %8s %s\n", "workload", "serial(s)", "openmp(s)", "speedup",
                "match");

    for (const std::string method : {"scfe", "deepfool", "cchvae", "nae"}) {
        std::vector<GenerationResult> a, b;
        const double ts = timed([&] {
            a = generate_batch(model, &ae, ds, instances, method, cfg, Exec::serial);
        });
        const double tp = timed([&] {
            b = generate_batch(model, &ae, ds, instances, method, cfg, Exec::openmp);
        });
        bool same = a.size() == b.size();
        for (std::size_t i = 0; same && i < a.size(); ++i)
            same = a[i].x_prime == b[i].x_prime && a[i].success == b[i].success;
        std::printf("%-14s %10.3f %10.3f %8.2fx %s\n", method.c_str(), ts, tp, ts / tp,
                    same ? "yes" : "NO");
    }

    BoundsConfig bc;
    for (const MethodPair pair :
         {MethodPair::scfe_vs_cw, MethodPair::scfe_vs_deepfool, MethodPair::cchvae_vs_nae}) {
        BoundsRun a, b;
        bc.exec = Exec::serial;
        const double ts = timed([&] { a = verify_bounds(model, ds, &ae, pair, bc); });
        bc.exec = Exec::openmp;
        const double tp = timed([&] { b = verify_bounds(model, ds, &ae, pair, bc); });
        bool same = a.records.size() == b.records.size();
        for (std::size_t i = 0; same && i < a.records.size(); ++i)
            same = a.records[i].empirical == b.records[i].empirical &&
                   a.records[i].bound == b.records[i].bound;
        std::printf("%-14s %10.3f %10.3f %8.2fx %s\n", to_string(pair).c_str(), ts, tp,
                    ts / tp, same ? "yes" : "NO");
    }
    return 0;
}
