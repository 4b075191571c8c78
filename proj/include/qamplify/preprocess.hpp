#ifndef QAMPLIFY_PREPROCESS_HPP
#define QAMPLIFY_PREPROCESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qamplify/csv.hpp"
#include "qamplify/linalg.hpp"
#include "qamplify/train.hpp"

namespace qamplify::pipeline {

// Named-column numeric dataset with a binary label (1 = went on backorder).
struct FeatureFrame {
  std::vector<std::string> column_names;
  linalg::Matrix rows;
  std::vector<int> label;
  std::vector<std::size_t> row_ids;  // indices into the cleaned frame

  std::size_t n_rows() const { return label.size(); }
  std::size_t n_cols() const { return column_names.size(); }
  std::size_t count_label(int value) const;
  std::size_t column_index(const std::string &name) const;  // throws if absent
};

struct SamplingConfig {
  int nearmiss_k = 3;
  double train_majority_ratio = 1.0;  // majority : minority in train
  double test_majority_ratio = 3.0;   // majority : minority in test
  std::size_t train_size = 1000;
  std::size_t test_size = 267;
  std::uint64_t seed = 42;
};

struct PreprocessArtifacts {
  std::vector<std::string> kept_columns;    // post-VIF survivors
  std::vector<std::string> scaled_columns;  // continuous: signed-log + scale
  std::vector<double> scaler_means, scaler_stds;  // parallel to scaled_columns
  std::vector<double> pca_means;                  // over kept_columns
  linalg::Matrix pca_components;                  // n_components x kept
  double vif_threshold = 5.0;
  SamplingConfig sampling;
};

// Row-wise cleaning: drops the sku column, maps Yes/No to 1/0, drops rows
// with missing markers ('?', 'NA', empty, NaN) or non-finite values, and
// drops rows with negative perf_*_avg readings.
FeatureFrame clean(const io::CsvTable &raw);

// Columns whose values are not all in {0, 1}.
std::vector<std::string> continuous_columns(const FeatureFrame &frame);

// x -> sign(x) * ln(1 + |x|) on the given columns (default: continuous).
FeatureFrame signed_log_transform(FeatureFrame frame,
                                  const std::vector<std::string> *columns = nullptr);

struct ScaleResult {
  FeatureFrame frame;
  std::vector<std::string> columns;  // columns actually scaled
  std::vector<double> means, stds;   // population std
  std::vector<std::string> dropped_constant;
};

ScaleResult standard_scale(FeatureFrame frame);

// VIF_j = 1 / (1 - R^2_j), regressing column j on the rest (with intercept).
// Perfect collinearity is capped at 1e12.
std::vector<double> compute_vif(const FeatureFrame &frame);

struct VifSelection {
  FeatureFrame frame;
  std::vector<std::string> kept;
  std::vector<std::string> dropped;  // in drop order
};

// Iteratively drops the highest-VIF column while max VIF > threshold.
VifSelection vif_select(FeatureFrame frame, double threshold = 5.0);

// NearMiss-1: keeps the majority rows with the smallest mean distance to
// their k nearest minority rows until majority:minority == target_ratio.
FeatureFrame nearmiss_undersample(const FeatureFrame &frame,
                                  double target_ratio, int k);

struct PcaResult {
  linalg::Matrix train, test;
  std::vector<double> means;
  linalg::Matrix components;  // n_components x n_features, orthonormal rows
  std::vector<double> eigenvalues;
};

// Components fit on train only; sign fixed so each component's
// largest-magnitude entry is positive.
PcaResult pca_fit_transform(const FeatureFrame &train,
                            const FeatureFrame &test, int n_components = 4);

struct Splits {
  FeatureFrame train, test;
};

// train: NearMiss-balanced at train_majority_ratio, train_size rows;
// test: seeded uniform draw from held-out rows at test_majority_ratio.
Splits build_splits(const FeatureFrame &frame, const SamplingConfig &config);

struct PreprocessOutput {
  nn::Dataset train, test;
  PreprocessArtifacts artifacts;
  std::vector<std::string> feature_names;        // PC1..PCn
  std::vector<std::size_t> train_row_ids, test_row_ids;  // cleaned-frame rows
  std::size_t train_class_counts[2] = {0, 0};
  std::size_t test_class_counts[2] = {0, 0};
  std::vector<std::string> warnings;
};

// Full chain: clean -> signed log -> scale -> VIF -> splits(NearMiss) -> PCA.
PreprocessOutput run_preprocess(const io::CsvTable &raw,
                                const SamplingConfig &config);

// Re-applies saved artifacts (log -> scale -> select -> center -> project)
// to rows in cleaned-frame feature space.
linalg::Matrix apply_artifacts(const PreprocessArtifacts &artifacts,
                               const FeatureFrame &cleaned);

}  // namespace qamplify::pipeline

#endif
