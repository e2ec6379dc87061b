#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cfadv/metrics.hpp"
#include "oracles.hpp"

using namespace cfadv;

namespace {

GenerationResult stub(std::size_t instance, Vec x, Vec xp, bool success = true) {
    GenerationResult r = make_result("stub", x, std::move(xp));
    r.instance = instance;
    r.success = success;
    return r;
}

}  // namespace

TEST_CASE("d_match basics") {
    const std::vector<Vec> a{{0.1, 0.2}, {0.3, 0.4}};
    CHECK(d_match(a, a, 0.0001) == 1.0);  // zero distance beats any positive theta

    // pairs at normalized distance exactly theta are excluded (strict <)
    const std::vector<Vec> b{{0.0, 0.0}};
    const std::vector<Vec> c{{0.05 * std::sqrt(2.0), 0.05 * std::sqrt(2.0)}};
    // ||diff||_2 = 0.1, /sqrt(2)... construct exact: use d=4 example instead
    const std::vector<Vec> p{{0.0, 0.0, 0.0, 0.0}};
    const std::vector<Vec> q{{0.05, 0.05, 0.05, 0.05}};  // ||.||_2 = 0.1, /sqrt(4) = 0.05
    CHECK(d_match(p, q, 0.05) == 0.0);
    CHECK(d_match(p, q, 0.1) == 1.0);
    (void)b;
    (void)c;

    CHECK_THROWS_AS(d_match(a, {{0.0, 0.0}}, 0.1), std::invalid_argument);
}

TEST_CASE("d_match is monotone in theta and stays in [0,1]") {
    Rng rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.uniform_int(12);
        const std::size_t d = 1 + rng.uniform_int(6);
        std::vector<Vec> a, b;
        for (std::size_t i = 0; i < n; ++i) {
            a.push_back(rng.normal_vec(d));
            Vec bp = a.back();
            for (auto& v : bp) v += 0.1 * rng.normal();
            b.push_back(std::move(bp));
        }
        double prev = -1.0;
        for (double theta : {0.02, 0.05, 0.1, 0.3, 1.0}) {
            const double v = d_match(a, b, theta);
            CHECK(v >= prev);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            prev = v;
        }
    }
}

TEST_CASE("spearman: identical, reversed and tied examples") {
    CHECK(*spearman_rho(Vec{0.1, -0.2, 0.3}, Vec{0.1, -0.2, 0.3}) == doctest::Approx(1.0));
    CHECK(*spearman_rho(Vec{1, 2, 3}, Vec{3, 2, 1}) == doctest::Approx(-1.0));
    // average ranks (1, 2.5, 2.5, 4) vs (1, 2, 3, 4): rho = 0.9487
    const auto rho = spearman_rho(Vec{1, 2, 2, 4}, Vec{1, 2, 3, 4});
    REQUIRE(rho.has_value());
    CHECK(*rho == doctest::Approx(0.9486832980505138).epsilon(1e-4));
}

TEST_CASE("spearman: constant input is a skip, not a zero") {
    CHECK_FALSE(spearman_rho(Vec{2.0, 2.0, 2.0}, Vec{1.0, 2.0, 3.0}).has_value());
    CHECK_FALSE(spearman_rho(Vec{1.0, 2.0}, Vec{5.0, 5.0}).has_value());
    CHECK_THROWS_AS(spearman_rho(Vec{1.0}, Vec{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(spearman_rho(Vec{1.0, 2.0}, Vec{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(spearman_rho(Vec{1.0, std::nan("")}, Vec{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("spearman: rank-based properties") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 2 + rng.uniform_int(8);
        const Vec a = rng.normal_vec(d);
        const Vec b = rng.normal_vec(d);
        const auto r1 = spearman_rho(a, b);
        REQUIRE(r1.has_value());
        CHECK(*r1 >= -1.0 - 1e-12);
        CHECK(*r1 <= 1.0 + 1e-12);
        // symmetry
        CHECK(*spearman_rho(b, a) == doctest::Approx(*r1).epsilon(1e-12));
        // invariance under strictly increasing transforms
        Vec ae(d), bs(d);
        for (std::size_t i = 0; i < d; ++i) {
            ae[i] = std::exp(a[i]);
            bs[i] = 3.0 * b[i] + 2.0;
        }
        CHECK(*spearman_rho(ae, bs) == doctest::Approx(*r1).epsilon(1e-12));
    }
}

TEST_CASE("fractional ranks average over ties") {
    CHECK(fractional_ranks(Vec{1, 2, 2, 4}) == Vec{1.0, 2.5, 2.5, 4.0});
    CHECK(fractional_ranks(Vec{5, 5, 5}) == Vec{2.0, 2.0, 2.0});
}

TEST_CASE("pairwise_report: identical outputs") {
    std::vector<GenerationResult> ce, ae;
    Rng rng(7);
    for (std::size_t i = 0; i < 20; ++i) {
        const Vec x = rng.normal_vec(3);
        Vec xp = x;
        for (auto& v : xp) v += rng.normal();
        ce.push_back(stub(i, x, xp));
        ae.push_back(stub(i, x, xp));
    }
    const PairwiseReport rep = pairwise_report(ce, ae, MatchConfig{});
    CHECK(rep.n_pairs == 20);
    CHECK(rep.rho_mean == doctest::Approx(1.0));
    CHECK(rep.rho_std == doctest::Approx(0.0));
    for (const auto& [theta, value] : rep.dmatch) CHECK(value == 1.0);
}

TEST_CASE("pairwise_report: far-apart outputs never match") {
    std::vector<GenerationResult> ce, ae;
    Rng rng(9);
    for (std::size_t i = 0; i < 10; ++i) {
        const Vec x = rng.normal_vec(2);
        Vec a = x, b = x;
        a[0] += 10.0;
        b[0] -= 10.0;
        b[1] += 5.0;
        ce.push_back(stub(i, x, a));
        ae.push_back(stub(i, x, b));
    }
    const PairwiseReport rep = pairwise_report(ce, ae, MatchConfig{});
    for (const auto& [theta, value] : rep.dmatch) CHECK(value == 0.0);
}

TEST_CASE("pairwise_report: failures are excluded pairwise and counted") {
    std::vector<GenerationResult> ce, ae;
    Rng rng(11);
    for (std::size_t i = 0; i < 10; ++i) {
        const Vec x = rng.normal_vec(2);
        Vec xp = x;
        xp[0] += 1.0;
        ce.push_back(stub(i, x, xp, i % 2 == 0));
        ae.push_back(stub(i, x, xp, i % 3 != 0));
    }
    const PairwiseReport rep = pairwise_report(ce, ae, MatchConfig{});
    CHECK(rep.n_instances == 10);
    CHECK(rep.n_pairs + rep.skipped == 10);
    CHECK(rep.skipped > 0);

    // misaligned instance ids are rejected
    ae[3].instance = 99;
    CHECK_THROWS_AS(pairwise_report(ce, ae, MatchConfig{}), std::invalid_argument);
}

TEST_CASE("match config validation") {
    MatchConfig bad;
    bad.thetas = {0.1, 0.05};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.thetas = {};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.thetas = {-0.1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("quantile: linear interpolation") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    CHECK(quantile(v, 0.0) == 1.0);
    CHECK(quantile(v, 1.0) == 4.0);
    CHECK(quantile(v, 0.5) == doctest::Approx(2.5));
    CHECK(quantile(v, 0.25) == doctest::Approx(1.75));
    const FiveNumber f = five_number_summary(v);
    CHECK(f.median == doctest::Approx(2.5));

    // a single observation collapses the box to a line
    const FiveNumber one = five_number_summary({0.7});
    CHECK(one.min == 0.7);
    CHECK(one.q1 == 0.7);
    CHECK(one.median == 0.7);
    CHECK(one.q3 == 0.7);
    CHECK(one.max == 0.7);
}
