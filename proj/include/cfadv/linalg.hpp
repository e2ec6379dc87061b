#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cfadv {

using Vec = std::vector<double>;

// Dense row-major matrix. Dimensions here are tiny (feature counts of tabular
// data), so everything below is written for clarity, not blocking.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    std::span<double> row(std::size_t i) { return {a.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const { return {a.data() + i * cols, cols}; }

    static Mat identity(std::size_t n);
    // v * w^T
    static Mat outer(const Vec& v, const Vec& w);
};

enum class NormOrder { one, two, inf };

std::string to_string(NormOrder p);
NormOrder norm_order_from_string(const std::string& s);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm(std::span<const double> v, NormOrder p);

Vec matvec(const Mat& m, std::span<const double> v);
Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& m);

// Induced operator norm. one/inf are the max column/row absolute sums; two is
// the spectral norm, computed exactly as sqrt(lambda_max(A^T A)).
double operator_norm(const Mat& m, NormOrder p);
double spectral_norm(const Mat& m);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> sym_eigenvalues(Mat m);

// Solve A x = b for symmetric positive definite A (Cholesky).
Vec solve_spd(Mat a, Vec b);

}  // namespace cfadv
