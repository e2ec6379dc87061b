#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cfadv/linalg.hpp"
#include "cfadv/rng.hpp"

using namespace cfadv;

TEST_CASE("vector norms") {
    Vec v{3.0, -4.0};
    CHECK(norm(v, NormOrder::one) == doctest::Approx(7.0));
    CHECK(norm(v, NormOrder::two) == doctest::Approx(5.0));
    CHECK(norm(v, NormOrder::inf) == doctest::Approx(4.0));
}

TEST_CASE("induced one and inf norms are column/row sums") {
    Mat m(2, 2);
    m(0, 0) = 1.0;
    m(0, 1) = -2.0;
    m(1, 0) = 3.0;
    m(1, 1) = 4.0;
    CHECK(operator_norm(m, NormOrder::one) == doctest::Approx(6.0));   // |{-2,4}| col
    CHECK(operator_norm(m, NormOrder::inf) == doctest::Approx(7.0));   // |{3,4}| row
}

TEST_CASE("spectral norm: identity and known matrix") {
    CHECK(spectral_norm(Mat::identity(4)) == doctest::Approx(1.0));
    // [[3,0],[4,0]] has singular value 5
    Mat m(2, 2);
    m(0, 0) = 3.0;
    m(1, 0) = 4.0;
    CHECK(spectral_norm(m) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("jacobi eigenvalues of a known symmetric matrix") {
    Mat m(2, 2);
    m(0, 0) = 2.0;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    m(1, 1) = 2.0;
    const auto ev = sym_eigenvalues(m);
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("spectral norm agrees with max |eigenvalue| on random symmetric matrices") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = 2 + rng.uniform_int(5);
        Mat m(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) m(i, j) = m(j, i) = rng.normal();
        double lam = 0.0;
        for (double e : sym_eigenvalues(m)) lam = std::max(lam, std::abs(e));
        CHECK(spectral_norm(m) == doctest::Approx(lam).epsilon(1e-7));
    }
}

TEST_CASE("solve_spd solves the system it was given") {
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = 1 + rng.uniform_int(6);
        // A = B B^T + I is symmetric positive definite
        Mat b(d, d);
        for (auto& v : b.a) v = rng.normal();
        Mat a = matmul(b, transpose(b));
        for (std::size_t i = 0; i < d; ++i) a(i, i) += 1.0;
        const Vec rhs = rng.normal_vec(d);
        const Vec x = solve_spd(a, rhs);
        const Vec ax = matvec(a, x);
        for (std::size_t i = 0; i < d; ++i) CHECK(ax[i] == doctest::Approx(rhs[i]).epsilon(1e-9));
    }
}

TEST_CASE("solve_spd rejects indefinite input") {
    Mat m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    CHECK_THROWS(solve_spd(m, Vec{1.0, 1.0}));
}

TEST_CASE("norm order parsing round-trips") {
    for (auto p : {NormOrder::one, NormOrder::two, NormOrder::inf})
        CHECK(norm_order_from_string(to_string(p)) == p);
    CHECK_THROWS(norm_order_from_string("3"));
}
