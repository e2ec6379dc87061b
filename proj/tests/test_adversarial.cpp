#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cfadv/adversarial.hpp"
#include "oracles.hpp"

using namespace cfadv;

TEST_CASE("binary C&W loss") {
    const LinearModel lin{{1.0, 1.0}, 0.0};
    CHECK(cw_loss_binary(lin, Vec{1.0, 2.0}) == 0.0);   // f = 3
    CHECK(cw_loss_binary(lin, Vec{-1.0, -2.0}) == 6.0); // f = -3
    CHECK(cw_loss_binary(lin, Vec{1.0, -1.0}) == 0.0);  // f = 0
}

TEST_CASE("cw closed form is c * w") {
    const LinearModel lin{{1.0, 0.0}, 0.0};
    const Vec x{-1.0, 0.0};
    CHECK(cw_closed_form(lin, x, 0.5) == Vec{0.5, 0.0});
    for (double c : {1e-3, 1e-6, 1e-9}) {
        CHECK(norm2(cw_closed_form(lin, x, c)) == doctest::Approx(c).epsilon(1e-12));
    }
    // positively predicted instance is outside the active branch
    CHECK_THROWS_AS(cw_closed_form(lin, Vec{1.0, 0.0}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(cw_closed_form(LinearModel{{0.0}, -1.0}, Vec{0.0}, 0.5),
                    std::invalid_argument);
}

TEST_CASE("cw closed form equals the optimal scfe delta at c = m/||w||^2") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 1 + rng.uniform_int(6);
        const LinearModel lin = oracles::random_linear(rng, d);
        Vec x = rng.normal_vec(d);
        if (predict_logit(lin, x) >= 0.0) {
            const double shift = (predict_logit(lin, x) + 1.0) / dot(lin.w, lin.w);
            for (std::size_t i = 0; i < d; ++i) x[i] -= shift * lin.w[i];
        }
        const double m = -predict_logit(lin, x);  // s = 0
        const double c = m / dot(lin.w, lin.w);
        const Vec cw = cw_closed_form(lin, x, c);
        const Vec dd = scfe_optimal_delta(lin, x, 0.0);
        for (std::size_t i = 0; i < d; ++i) CHECK(std::abs(cw[i] - dd[i]) <= 1e-12);
    }
}

TEST_CASE("cw_iterative lands on the hinge deactivation point") {
    Rng rng(5);
    int hits = 0, attempts = 0;
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t d = 2 + rng.uniform_int(3);
        const LinearModel lin = oracles::random_linear(rng, d);
        Vec x = rng.normal_vec(d);
        if (predict_logit(lin, x) >= 0.0)
            for (auto& v : x) v = -v;
        if (predict_logit(lin, x) >= 0.0) continue;
        ++attempts;

        const double thresh = -predict_logit(lin, x) / dot(lin.w, lin.w);
        CwParams p;
        p.c = 2.0 * thresh;  // hinge-active stationary point is past the boundary
        p.max_steps = 4000;
        p.adam_lr = 0.05;
        const GenerationResult r = cw_iterative(ScoringModel{lin}, x, p);

        const double t = oracles::cw_line_search(lin, x, p.c);
        Vec expect(d);
        for (std::size_t i = 0; i < d; ++i) expect[i] = t * lin.w[i];
        Vec diff(d);
        for (std::size_t i = 0; i < d; ++i) diff[i] = r.delta[i] - expect[i];
        hits += (norm2(diff) <= 1e-3);
        CHECK(r.success);  // the boundary flips by the tie-up convention
    }
    CHECK(attempts >= 15);
    CHECK(hits == attempts);
}

TEST_CASE("cw_iterative below the threshold matches the interior stationary point") {
    const LinearModel lin{{1.0, 0.5}, 0.0};
    const Vec x{-2.0, -1.0};
    const double thresh = -predict_logit(lin, x) / dot(lin.w, lin.w);
    CwParams p;
    p.c = 0.25 * thresh;
    p.max_steps = 4000;
    const GenerationResult r = cw_iterative(ScoringModel{lin}, x, p);
    const double t = oracles::cw_line_search(lin, x, p.c);
    Vec diff(2);
    for (int i = 0; i < 2; ++i) diff[i] = r.delta[i] - t * lin.w[i];
    CHECK(norm2(diff) <= 1e-3);
    CHECK_FALSE(r.success);  // interior point keeps the negative label
}

TEST_CASE("cw_iterative: already-positive instance stays put") {
    const LinearModel lin{{1.0, 0.0}, 0.0};
    CwParams p;
    p.c = 1.0;
    p.max_steps = 500;
    const GenerationResult r = cw_iterative(ScoringModel{lin}, Vec{2.0, 0.0}, p);
    CHECK(norm2(r.delta) < 1e-6);
    CHECK_FALSE(r.success);
}

TEST_CASE("cw_iterative clip box keeps coordinates in [0,1]") {
    const LinearModel lin{{1.0, 1.0}, -3.0};  // decision far outside the box
    CwParams p;
    p.c = 10.0;
    p.clip_box = true;
    p.max_steps = 800;
    const GenerationResult r = cw_iterative(ScoringModel{lin}, Vec{0.9, 0.9}, p);
    for (double v : r.x_prime) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("deepfool: one exact step on a linear model") {
    const LinearModel lin{{1.0, 0.0}, 0.0};
    DeepFoolParams p;
    p.overshoot = 0.0;
    const GenerationResult r = deepfool(ScoringModel{lin}, Vec{2.0, 0.0}, p);
    CHECK(r.iterations == 1);
    CHECK(r.delta == Vec{-2.0, 0.0});
    CHECK(predict_logit(ScoringModel{lin}, r.x_prime) == 0.0);

    DeepFoolParams po;
    po.overshoot = 0.02;
    const GenerationResult ro = deepfool(ScoringModel{lin}, Vec{2.0, 0.0}, po);
    CHECK(ro.delta[0] == doctest::Approx(-2.04).epsilon(1e-12));
    CHECK(predict_logit(ScoringModel{lin}, ro.x_prime) == doctest::Approx(-0.04));
    CHECK(ro.success);  // 1 -> 0 flip
}

TEST_CASE("deepfool single-step norm identity on linear models") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 1 + rng.uniform_int(6);
        const LinearModel lin = oracles::random_linear(rng, d);
        const Vec x = rng.normal_vec(d);
        if (predict_logit(lin, x) == 0.0) continue;
        DeepFoolParams p;
        p.overshoot = rng.uniform(0.0, 0.1);
        const GenerationResult r = deepfool(ScoringModel{lin}, x, p);
        CHECK(r.iterations == 1);
        CHECK(norm2(r.delta) ==
              doctest::Approx(oracles::min_flip_radius(lin, x) * (1.0 + p.overshoot))
                  .epsilon(1e-9));
    }
}

TEST_CASE("deepfool equals the optimal scfe delta at s = 0") {
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 1 + rng.uniform_int(6);
        const LinearModel lin = oracles::random_linear(rng, d);
        const Vec x = rng.normal_vec(d);
        DeepFoolParams p;
        p.overshoot = 0.0;
        const GenerationResult r = deepfool(ScoringModel{lin}, x, p);
        const Vec dd = scfe_optimal_delta(lin, x, 0.0);
        for (std::size_t i = 0; i < d; ++i) CHECK(std::abs(r.delta[i] - dd[i]) <= 1e-12);
    }
}

TEST_CASE("deepfool reports vanishing gradients") {
    // constant nonzero logit: zero first layer with a bias on the output
    MlpModel m;
    m.net.relu_hidden = true;
    DenseLayer l1;
    l1.W = Mat(3, 2);
    l1.b.assign(3, 1.0);
    DenseLayer l2;
    l2.W = Mat(1, 3);
    l2.b.assign(1, -2.0);
    m.net.layers = {l1, l2};
    DeepFoolParams p;
    const GenerationResult r = deepfool(ScoringModel{m}, Vec{0.5, 0.5}, p);
    CHECK_FALSE(r.success);
    CHECK(r.params.count("note") == 1);
}

TEST_CASE("nae: constant model never flips and budget is reported") {
    const LinearModel lin{{0.0, 0.0}, -1.0};
    const Autoencoder ae = identity_autoencoder(2);
    LatentSearchParams p;
    p.r0 = 0.2;
    p.max_rounds = 4;
    p.seed = 3;
    const GenerationResult r = nae_search(ScoringModel{lin}, ae, Vec{0.0, 0.0}, p);
    CHECK_FALSE(r.success);
    CHECK(r.radius_used == doctest::Approx(0.8));
}

TEST_CASE("nae: successful annulus edge is near the geometric minimum") {
    Rng rng(11);
    const Autoencoder ae = identity_autoencoder(3);
    for (int trial = 0; trial < 25; ++trial) {
        const LinearModel lin = oracles::random_linear(rng, 3);
        Vec x = rng.normal_vec(3);
        if (predict_label(ScoringModel{lin}, x) != 0) {
            for (auto& v : x) v = -v;
            if (predict_label(ScoringModel{lin}, x) != 0) continue;
        }
        LatentSearchParams p;
        p.r0 = 0.15;  // annulus width
        p.max_rounds = 60;
        p.samples = 16;
        p.seed = rng.next_u64();
        const GenerationResult r = nae_search(ScoringModel{lin}, ae, x, p);
        if (!r.success) continue;
        CHECK(r.radius_used >= oracles::min_flip_radius(lin, x) - p.r0 - 1e-9);
        CHECK(predict_label(ScoringModel{lin}, r.x_prime) == 1);
    }
}

TEST_CASE("nae and cchvae flip the same instances on a shared identity manifold") {
    Rng rng(13);
    const Autoencoder ae = identity_autoencoder(2);
    const LinearModel lin{{1.0, 1.0}, 0.0};
    int both = 0, considered = 0;
    for (int trial = 0; trial < 40; ++trial) {
        Vec x = rng.normal_vec(2);
        if (predict_label(ScoringModel{lin}, x) != 0) continue;
        ++considered;
        LatentSearchParams pc;
        pc.r0 = 0.05;
        pc.growth = 1.5;
        pc.max_rounds = 40;
        pc.seed = rng.next_u64();
        LatentSearchParams pn;
        pn.r0 = 0.25;
        pn.max_rounds = 40;
        pn.seed = rng.next_u64();
        const bool c_ok = cchvae_search(ScoringModel{lin}, ae, x, pc).success;
        const bool n_ok = nae_search(ScoringModel{lin}, ae, x, pn).success;
        CHECK(c_ok == n_ok);
        both += (c_ok && n_ok);
    }
    CHECK(considered > 5);
    CHECK(both == considered);
}

TEST_CASE("deepfool param validation") {
    DeepFoolParams p;
    p.max_iter = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    DeepFoolParams q;
    q.overshoot = -0.1;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    CwParams c;
    c.c = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
