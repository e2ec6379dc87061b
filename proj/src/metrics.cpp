#include "cfadv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfadv {

void MatchConfig::validate() const {
    if (thetas.empty()) throw std::invalid_argument("match config: no thresholds");
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (thetas[i] <= 0.0) throw std::invalid_argument("match config: theta must be positive");
        if (i > 0 && thetas[i] <= thetas[i - 1])
            throw std::invalid_argument("match config: thetas must be ascending");
    }
}

double d_match(const std::vector<Vec>& ce_outputs, const std::vector<Vec>& ae_outputs,
               double theta) {
    if (ce_outputs.size() != ae_outputs.size())
        throw std::invalid_argument("d_match: list length mismatch");
    if (ce_outputs.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ce_outputs.size(); ++i) {
        const Vec& a = ce_outputs[i];
        const Vec& b = ae_outputs[i];
        if (a.size() != b.size()) throw std::invalid_argument("d_match: dimension mismatch");
        double ss = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double e = a[j] - b[j];
            ss += e * e;
        }
        const double normalized = std::sqrt(ss) / std::sqrt(static_cast<double>(a.size()));
        if (normalized < theta) ++hits;  // strict, by definition
    }
    return static_cast<double>(hits) / static_cast<double>(ce_outputs.size());
}

Vec fractional_ranks(const Vec& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    Vec ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based average rank
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> spearman_rho(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("spearman_rho: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("spearman_rho: need at least 2 elements");
    for (double v : a)
        if (!std::isfinite(v)) throw std::invalid_argument("spearman_rho: non-finite input");
    for (double v : b)
        if (!std::isfinite(v)) throw std::invalid_argument("spearman_rho: non-finite input");

    const Vec ra = fractional_ranks(a);
    const Vec rb = fractional_ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) return std::nullopt;  // all-tied vector
    return cov / std::sqrt(va * vb);
}

PairwiseReport pairwise_report(const std::vector<GenerationResult>& ce,
                               const std::vector<GenerationResult>& ae,
                               const MatchConfig& cfg) {
    cfg.validate();
    if (ce.size() != ae.size())
        throw std::invalid_argument("pairwise_report: result lists are not aligned");
    PairwiseReport rep;
    rep.n_instances = ce.size();
    if (!ce.empty()) {
        rep.ce_method = ce.front().method;
        rep.ae_method = ae.front().method;
    }

    std::vector<Vec> xs_ce, xs_ae;
    for (std::size_t i = 0; i < ce.size(); ++i) {
        if (ce[i].instance != ae[i].instance)
            throw std::invalid_argument("pairwise_report: instance ids do not line up");
        if (!ce[i].success || !ae[i].success) {
            ++rep.skipped;
            continue;
        }
        ++rep.n_pairs;
        xs_ce.push_back(ce[i].x_prime);
        xs_ae.push_back(ae[i].x_prime);
        const auto rho = spearman_rho(ce[i].delta, ae[i].delta);
        if (rho)
            rep.rhos.push_back(*rho);
        else
            ++rep.rho_skipped;
    }

    if (!rep.rhos.empty()) {
        double mean = 0.0;
        for (double r : rep.rhos) mean += r;
        mean /= static_cast<double>(rep.rhos.size());
        double var = 0.0;
        for (double r : rep.rhos) var += (r - mean) * (r - mean);
        var /= static_cast<double>(rep.rhos.size());
        rep.rho_mean = mean;
        rep.rho_std = std::sqrt(var);
    }
    for (double theta : cfg.thetas)
        rep.dmatch.emplace_back(theta, d_match(xs_ce, xs_ae, theta));
    return rep;
}

double quantile(std::vector<double> data, double q) {
    if (data.empty()) throw std::invalid_argument("quantile: empty data");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
    std::sort(data.begin(), data.end());
    const double pos = q * static_cast<double>(data.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= data.size()) return data.back();
    const double frac = pos - static_cast<double>(lo);
    return data[lo] + frac * (data[lo + 1] - data[lo]);
}

FiveNumber five_number_summary(const std::vector<double>& data) {
    FiveNumber f;
    f.min = quantile(data, 0.0);
    f.q1 = quantile(data, 0.25);
    f.median = quantile(data, 0.5);
    f.q3 = quantile(data, 0.75);
    f.max = quantile(data, 1.0);
    return f;
}

}  // namespace cfadv
