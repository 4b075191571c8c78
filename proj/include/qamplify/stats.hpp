#ifndef QAMPLIFY_STATS_HPP
#define QAMPLIFY_STATS_HPP

#include <cstdint>
#include <vector>

#include "qamplify/train.hpp"

namespace qamplify::stats {

// Regularized incomplete beta I_x(a, b) by Lentz continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided p of a Student-t statistic: I_{nu/(nu+t^2)}(nu/2, 1/2).
double student_t_two_sided_p(double t, int dof);

struct StatTestResult {
  double t_statistic = 0.0;
  double p_value = 0.0;
  int degrees_of_freedom = 0;
  std::vector<double> scores_a, scores_b;
  bool zero_variance = false;  // set => no p reported
};

// Paired t-test on per-fold scores; sample (n-1) standard deviation.
StatTestResult paired_ttest(const std::vector<double> &a,
                            const std::vector<double> &b);

enum class ModelKind { QAmplifyNet, Logistic, Random };

struct ModelSpec {
  ModelKind kind = ModelKind::QAmplifyNet;
  nn::TrainConfig train;  // used by QAmplifyNet; seed also feeds Random
};

struct CrossvalResult {
  StatTestResult accuracy;
  StatTestResult roc_auc;
  std::vector<int> fold_assignment;  // per input row
};

// Seeded shuffled k-fold; both models train/evaluate on identical folds.
CrossvalResult crossval_compare(const ModelSpec &model_a, const ModelSpec &model_b,
                                const nn::Dataset &data, int folds,
                                std::uint64_t seed);

}  // namespace qamplify::stats

#endif
