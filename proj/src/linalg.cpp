#include "cfadv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfadv {

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::outer(const Vec& v, const Vec& w) {
    Mat m(v.size(), w.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * w[j];
    return m;
}

std::string to_string(NormOrder p) {
    switch (p) {
        case NormOrder::one: return "1";
        case NormOrder::two: return "2";
        case NormOrder::inf: return "inf";
    }
    return "?";
}

NormOrder norm_order_from_string(const std::string& s) {
    if (s == "1") return NormOrder::one;
    if (s == "2") return NormOrder::two;
    if (s == "inf") return NormOrder::inf;
    throw std::invalid_argument("unsupported norm order: " + s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double norm(std::span<const double> v, NormOrder p) {
    double s = 0.0;
    switch (p) {
        case NormOrder::one:
            for (double x : v) s += std::abs(x);
            return s;
        case NormOrder::two:
            return norm2(v);
        case NormOrder::inf:
            for (double x : v) s = std::max(s, std::abs(x));
            return s;
    }
    return s;
}

Vec matvec(const Mat& m, std::span<const double> v) {
    if (m.cols != v.size()) throw std::invalid_argument("matvec: size mismatch");
    Vec out(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) out[i] = dot(m.row(i), v);
    return out;
}

Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: size mismatch");
    Mat c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Mat transpose(const Mat& m) {
    Mat t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

double spectral_norm(const Mat& m) {
    if (m.rows == 0 || m.cols == 0) return 0.0;
    // sqrt of the top eigenvalue of A^T A; Jacobi converges to machine
    // precision on the small matrices used here, unlike plain power
    // iteration whose error depends on the spectral gap.
    Mat gram(m.cols, m.cols);
    for (std::size_t i = 0; i < m.cols; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < m.rows; ++k) s += m(k, i) * m(k, j);
            gram(i, j) = s;
        }
    const auto ev = sym_eigenvalues(std::move(gram));
    return std::sqrt(std::max(0.0, ev.back()));
}

double operator_norm(const Mat& m, NormOrder p) {
    switch (p) {
        case NormOrder::one: {  // max column absolute sum
            double best = 0.0;
            for (std::size_t j = 0; j < m.cols; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < m.rows; ++i) s += std::abs(m(i, j));
                best = std::max(best, s);
            }
            return best;
        }
        case NormOrder::inf: {  // max row absolute sum
            double best = 0.0;
            for (std::size_t i = 0; i < m.rows; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < m.cols; ++j) s += std::abs(m(i, j));
                best = std::max(best, s);
            }
            return best;
        }
        case NormOrder::two:
            return spectral_norm(m);
    }
    return 0.0;
}

std::vector<double> sym_eigenvalues(Mat m) {
    if (m.rows != m.cols) throw std::invalid_argument("sym_eigenvalues: not square");
    const std::size_t n = m.rows;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (m(p, q) == 0.0) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = m(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

Vec solve_spd(Mat a, Vec b) {
    if (a.rows != a.cols || a.rows != b.size())
        throw std::invalid_argument("solve_spd: size mismatch");
    const std::size_t n = a.rows;
    // In-place Cholesky: a becomes L (lower triangle).
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (d <= 0.0) throw std::runtime_error("solve_spd: matrix not positive definite");
        a(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / a(j, j);
        }
    }
    // Forward then backward substitution.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) b[i] -= a(i, k) * b[k];
        b[i] /= a(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) b[ii] -= a(k, ii) * b[k];
        b[ii] /= a(ii, ii);
    }
    return b;
}

}  // namespace cfadv
