#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>

#include "cfadv/experiments.hpp"
#include "cfadv/parallel.hpp"

using namespace cfadv;

TEST_CASE("parallel_for covers every index exactly once") {
    for (auto exec : {Exec::serial, Exec::openmp}) {
        std::vector<std::atomic<int>> hits(257);
        for (auto& h : hits) h = 0;
        parallel_for(hits.size(), exec, [&](std::size_t i) { ++hits[i]; });
        for (auto& h : hits) CHECK(h == 1);
    }
}

namespace {

struct Workbench {
    Dataset ds;
    ScoringModel model;
    Autoencoder ae;
    std::vector<std::size_t> instances;
    ExperimentConfig cfg;
};

Workbench make_bench() {
    Workbench wb;
    wb.cfg.synthetic = SyntheticSpec{800, {1.0, 1.0}, {-1.0, -1.0}};
    wb.cfg.seed = 19;
    wb.cfg.methods.scfe.lambda_init = 1e-4;
    wb.cfg.methods.scfe.lambda_steps = 1;
    wb.cfg.methods.scfe.adam_steps = 300;
    wb.cfg.methods.nae.r0 = 0.25;
    wb.ds = prepare_dataset(wb.cfg);
    TrainConfig tc;
    tc.epochs = 10;
    tc.seed = 3;
    wb.model = train_logistic(wb.ds, tc);
    wb.ae = identity_autoencoder(wb.ds.dim());
    wb.instances = negative_test_instances(wb.model, wb.ds);
    return wb;
}

}  // namespace

TEST_CASE("generation results are identical under serial and openmp execution") {
    const Workbench wb = make_bench();
    REQUIRE(wb.instances.size() > 20);
    for (const std::string method : {"scfe", "scfe_cf", "cw", "deepfool", "cchvae", "nae"}) {
        const auto a =
            generate_batch(wb.model, &wb.ae, wb.ds, wb.instances, method, wb.cfg, Exec::serial);
        const auto b =
            generate_batch(wb.model, &wb.ae, wb.ds, wb.instances, method, wb.cfg, Exec::openmp);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].instance == b[i].instance);
            CHECK(a[i].success == b[i].success);
            CHECK(a[i].x_prime == b[i].x_prime);  // bitwise
            CHECK(a[i].radius_used == b[i].radius_used);
            CHECK(a[i].iterations == b[i].iterations);
        }
    }
}

TEST_CASE("bound records are identical under serial and openmp execution") {
    const Workbench wb = make_bench();
    BoundsConfig bc;
    bc.seed = 5;
    bc.latent.r0 = 0.1;
    bc.latent.max_rounds = 40;
    for (auto pair : {MethodPair::scfe_vs_cw, MethodPair::scfe_vs_deepfool,
                      MethodPair::cchvae_vs_nae}) {
        bc.exec = Exec::serial;
        const BoundsRun a = verify_bounds(wb.model, wb.ds, &wb.ae, pair, bc);
        bc.exec = Exec::openmp;
        const BoundsRun b = verify_bounds(wb.model, wb.ds, &wb.ae, pair, bc);
        REQUIRE(a.records.size() == b.records.size());
        CHECK(a.violations == b.violations);
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            CHECK(a.records[i].instance_id == b.records[i].instance_id);
            CHECK(a.records[i].empirical == b.records[i].empirical);  // bitwise
            CHECK(a.records[i].bound == b.records[i].bound);
        }
    }
}
