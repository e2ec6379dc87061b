#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cfadv/counterfactuals.hpp"

namespace cfadv {

struct MatchConfig {
    std::vector<double> thetas{0.02, 0.05, 0.1};

    void validate() const;
};

// Fraction of paired outputs with (1/sqrt(d)) ||x_ce - x_ae||_2 strictly
// below theta.
double d_match(const std::vector<Vec>& ce_outputs, const std::vector<Vec>& ae_outputs,
               double theta);

// Spearman rank correlation with average ranks for ties. An all-tied input
// has no defined ranking, so the result is empty rather than 0.
std::optional<double> spearman_rho(const Vec& a, const Vec& b);

Vec fractional_ranks(const Vec& v);

struct PairwiseReport {
    std::string ce_method;
    std::string ae_method;
    std::size_t n_instances = 0;   // aligned pairs seen
    std::size_t n_pairs = 0;       // pairs where both methods succeeded
    std::size_t skipped = 0;       // pairs dropped because a method failed
    std::size_t rho_skipped = 0;   // both-success pairs with undefined rho
    std::vector<double> rhos;
    double rho_mean = std::numeric_limits<double>::quiet_NaN();
    double rho_std = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<double, double>> dmatch;  // (theta, value)
};

// Instance-aligned comparison; only pairs where both runs succeeded enter the
// statistics and exclusions are counted.
PairwiseReport pairwise_report(const std::vector<GenerationResult>& ce,
                               const std::vector<GenerationResult>& ae, const MatchConfig& cfg);

// Quantile with linear interpolation between closest ranks; data need not be
// sorted.
double quantile(std::vector<double> data, double q);

struct FiveNumber {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};
FiveNumber five_number_summary(const std::vector<double>& data);

}  // namespace cfadv
