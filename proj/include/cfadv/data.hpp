#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cfadv/linalg.hpp"

namespace cfadv {

// Raised when a CSV cell cannot be interpreted under the schema.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Raised when the file disagrees with the schema (headers, unknown levels,
// missing values).
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericKind {};
struct CategoricalKind {
    std::vector<std::string> levels;
};
using ColumnKind = std::variant<NumericKind, CategoricalKind>;

struct SchemaColumn {
    std::string name;
    ColumnKind kind;
};

struct FeatureSchema {
    std::vector<SchemaColumn> columns;
    std::string label_column;
    std::string positive_label;

    void validate() const;
    // Width of the design matrix: 1 per numeric column, one column per level
    // for categoricals, in schema order.
    std::size_t feature_dim() const;
    std::vector<std::string> feature_names() const;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

struct Dataset {
    Mat X;                                          // n x d, row per sample
    std::vector<int> y;                             // 0/1 labels
    FeatureSchema schema;
    std::vector<std::pair<double, double>> scaling; // per-feature (min, max); (0,1) = identity
    SplitIndices split;                             // defaults to all-train

    std::size_t n() const { return X.rows; }
    std::size_t dim() const { return X.cols; }
    std::span<const double> row(std::size_t i) const { return X.row(i); }
};

// n samples alternating class 0 ~ N(mu1, I) and class 1 ~ N(mu2, I); balanced
// to within one sample. Coordinates are kept raw (identity scaling).
Dataset gen_gaussian_mixture(std::size_t n, const Vec& mu1, const Vec& mu2, std::uint64_t seed);

// RFC-4180-style CSV with a required header; leading '#' comment lines are
// skipped. Categorical columns are one-hot expanded in schema order. Rows
// with missing (empty) values are rejected, naming the row.
Dataset load_csv(const std::string& path, const FeatureSchema& schema);

// Writes header + rows; label column last. Values round-trip exactly (%.17g).
// A '# key=value ...' comment line is prepended when `meta` is non-empty.
void save_csv(const Dataset& ds, const std::string& path, const std::string& meta = "");

// Per-feature (v - min) / (max - min); constant features map to 0. The
// (min, max) pairs are recorded for the inverse transform.
Dataset scale_minmax(const Dataset& ds);

// Deterministic shuffled split; test size = round(n * fraction), at least one
// row on each side.
Dataset train_test_split(const Dataset& ds, double test_fraction, std::uint64_t seed);

}  // namespace cfadv
