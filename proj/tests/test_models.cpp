#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cfadv/models.hpp"
#include "oracles.hpp"

using namespace cfadv;

namespace {

MlpModel zero_mlp(std::size_t d, std::size_t hidden) {
    MlpModel m;
    m.net.relu_hidden = true;
    DenseLayer l1;
    l1.W = Mat(hidden, d);
    l1.b.assign(hidden, 0.0);
    DenseLayer l2;
    l2.W = Mat(1, hidden);
    l2.b.assign(1, 0.0);
    m.net.layers = {l1, l2};
    return m;
}

Dataset mixture_split(std::uint64_t seed) {
    Dataset ds = gen_gaussian_mixture(5000, {1.0, 1.0}, {-1.0, -1.0}, seed);
    return train_test_split(ds, 0.2, seed + 1);
}

}  // namespace

TEST_CASE("predict_logit on linear models is the dot product") {
    CHECK(predict_logit(LinearModel{{1.0, 0.0}, 0.0}, Vec{2.0, 3.0}) == 2.0);
    CHECK(predict_logit(LinearModel{{1.0, 1.0}, -1.0}, Vec{0.0, 0.0}) == -1.0);
    CHECK(predict_logit(ScoringModel{zero_mlp(3, 4)}, Vec{0.3, -0.7, 2.0}) == 0.0);
    CHECK_THROWS_AS(predict_logit(LinearModel{{1.0}, 0.0}, Vec{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("predict_label thresholds at zero, tie goes up") {
    const ScoringModel m = LinearModel{{1.0}, 0.0};
    CHECK(predict_label(m, Vec{-3.0}) == 0);
    CHECK(predict_label(m, Vec{0.0}) == 1);
    CHECK(predict_label(m, Vec{0.1}) == 1);
}

TEST_CASE("logit/label consistency on random inputs") {
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        const LinearModel lin = oracles::random_linear(rng, 3);
        const Vec x = rng.normal_vec(3);
        const ScoringModel m = lin;
        CHECK((predict_label(m, x) == 1) == (predict_logit(m, x) >= 0.0));
    }
}

TEST_CASE("train_logistic beats 0.88 on the gaussian mixture") {
    const Dataset ds = mixture_split(7);
    TrainConfig cfg;
    cfg.epochs = 50;
    cfg.learning_rate = 0.002;
    cfg.batch_size = 64;
    cfg.seed = 7;
    TrainStats stats;
    const LinearModel lin = train_logistic(ds, cfg, &stats);
    const double acc = accuracy(ScoringModel{lin}, ds, ds.split.test);
    CHECK(acc >= 0.88);
    CHECK(stats.loss_final < stats.loss_initial);
    // Bayes rate for these components is ~0.921; the model should be close.
    const double bayes = oracles::bayes_accuracy(ds, {1.0, 1.0}, {-1.0, -1.0}, ds.split.test);
    CHECK(acc >= bayes - 0.04);
}

TEST_CASE("train_logistic separates a separable four-point set") {
    Dataset ds;
    ds.X = Mat(4, 2);
    const double pts[4][2] = {{0.0, 0.0}, {0.2, 0.1}, {1.0, 1.0}, {0.9, 0.8}};
    for (int i = 0; i < 4; ++i) {
        ds.X(i, 0) = pts[i][0];
        ds.X(i, 1) = pts[i][1];
    }
    ds.y = {0, 0, 1, 1};
    ds.split.train = {0, 1, 2, 3};
    TrainConfig cfg;
    cfg.epochs = 400;
    cfg.batch_size = 4;
    cfg.learning_rate = 0.05;
    cfg.seed = 1;
    const LinearModel lin = train_logistic(ds, cfg);
    CHECK(accuracy(ScoringModel{lin}, ds, ds.split.train) == 1.0);
}

TEST_CASE("training is deterministic per seed") {
    const Dataset ds = mixture_split(11);
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.seed = 3;
    const LinearModel a = train_logistic(ds, cfg);
    const LinearModel b = train_logistic(ds, cfg);
    CHECK(a.w == b.w);
    CHECK(a.b == b.b);

    const MlpModel ma = train_mlp(ds, {6, 3}, cfg);
    const MlpModel mb = train_mlp(ds, {6, 3}, cfg);
    for (std::size_t l = 0; l < ma.net.layers.size(); ++l) {
        CHECK(ma.net.layers[l].W.a == mb.net.layers[l].W.a);
        CHECK(ma.net.layers[l].b == mb.net.layers[l].b);
    }
}

TEST_CASE("single-class training data is rejected") {
    Dataset ds = gen_gaussian_mixture(10, {1.0}, {-1.0}, 2);
    for (auto& y : ds.y) y = 1;
    TrainConfig cfg;
    CHECK_THROWS_AS(train_logistic(ds, cfg), std::invalid_argument);
    CHECK_THROWS_AS(train_mlp(ds, {4}, cfg), std::invalid_argument);
}

TEST_CASE("train_mlp reaches 0.88 with the appendix architecture") {
    const Dataset ds = mixture_split(7);
    TrainConfig cfg;
    cfg.epochs = 50;
    cfg.learning_rate = 0.002;
    cfg.batch_size = 64;
    cfg.seed = 7;
    const MlpModel mlp = train_mlp(ds, {18, 9, 3}, cfg);
    CHECK(accuracy(ScoringModel{mlp}, ds, ds.split.test) >= 0.88);
}

TEST_CASE("train_mlp with no hidden layers matches logistic regression") {
    const Dataset ds = mixture_split(13);
    TrainConfig cfg;
    cfg.epochs = 20;
    cfg.seed = 5;
    const MlpModel mlp = train_mlp(ds, {}, cfg);
    const LinearModel lin = train_logistic(ds, cfg);
    const double a1 = accuracy(ScoringModel{mlp}, ds, ds.split.test);
    const double a2 = accuracy(ScoringModel{lin}, ds, ds.split.test);
    CHECK(std::abs(a1 - a2) <= 0.02);
}

TEST_CASE("zero learning rate leaves the loss unchanged") {
    const Dataset ds = mixture_split(17);
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.learning_rate = 0.0;
    cfg.seed = 2;
    TrainStats stats;
    train_mlp(ds, {4}, cfg, &stats);
    CHECK(stats.loss_final == stats.loss_initial);
}

TEST_CASE("input_gradient: linear model returns w at any x") {
    const LinearModel lin{{3.0, 4.0}, -1.0};
    Rng rng(23);
    for (int i = 0; i < 10; ++i) {
        CHECK(input_gradient(lin, rng.normal_vec(2)) == lin.w);
    }
    CHECK(input_gradient(ScoringModel{zero_mlp(2, 5)}, Vec{1.0, 2.0}) == Vec{0.0, 0.0});
}

TEST_CASE("input_gradient matches central finite differences on random MLPs") {
    Rng rng(29);
    int done = 0;
    while (done < 100) {
        const std::size_t d = 2 + rng.uniform_int(4);
        Rng init(rng.next_u64());
        const MlpModel mlp{make_stack({d, 8, 4, 1}, true, init)};
        const Vec x = rng.normal_vec(d);

        // resample when a pre-activation sits on a ReLU kink
        ForwardTrace trace;
        forward_trace(mlp.net, x, trace);
        bool near_kink = false;
        for (std::size_t l = 0; l + 1 < mlp.net.layers.size(); ++l)
            for (double z : trace.pre[l]) near_kink |= std::abs(z) < 1e-6;
        if (near_kink) continue;

        const Vec g = input_gradient(ScoringModel{mlp}, x);
        const Vec fd = oracles::fd_gradient(ScoringModel{mlp}, x, 1e-5);
        const double scale = std::max(norm2(g), 1e-8);
        for (std::size_t i = 0; i < d; ++i) {
            CHECK(std::abs(g[i] - fd[i]) / scale < 1e-5);
        }
        ++done;
    }
}

TEST_CASE("local_linearize reproduces the model at the anchor") {
    Rng rng(37);
    // fixed point on a linear model
    const LinearModel lin = oracles::random_linear(rng, 3);
    const Vec x0 = rng.normal_vec(3);
    const LocalLinearization at = local_linearize(ScoringModel{lin}, x0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(at.w[i] == lin.w[i]);
    CHECK(at.b == doctest::Approx(lin.b).epsilon(1e-12));

    for (int trial = 0; trial < 20; ++trial) {
        Rng init(rng.next_u64());
        const MlpModel mlp{make_stack({3, 6, 1}, true, init)};
        const Vec x = rng.normal_vec(3);
        const LocalLinearization lz = local_linearize(ScoringModel{mlp}, x);
        const double fhat = dot(lz.w, x) + lz.b;
        CHECK(std::abs(fhat - predict_logit(ScoringModel{mlp}, x)) <= 1e-12);
    }
}

TEST_CASE("local_linearize is a first-order approximation") {
    Rng rng(41);
    Rng init(101);
    const MlpModel mlp{make_stack({3, 10, 5, 1}, true, init)};
    const ScoringModel m = mlp;
    const Vec x = rng.normal_vec(3);
    const LocalLinearization lz = local_linearize(m, x);
    const Vec dir = rng.normal_vec(3);

    double prev_ratio = 1e300;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        Vec xp(3);
        for (int i = 0; i < 3; ++i) xp[i] = x[i] + eps * dir[i] / norm2(dir);
        const double err = std::abs(predict_logit(m, xp) - (dot(lz.w, xp) + lz.b));
        const double ratio = err / eps;
        CHECK(ratio <= prev_ratio + 1e-9);
        prev_ratio = ratio;
    }
}

TEST_CASE("train config validation") {
    TrainConfig cfg;
    cfg.epochs = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.epochs = 1;
    cfg.batch_size = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
