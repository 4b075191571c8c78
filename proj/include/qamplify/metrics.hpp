#ifndef QAMPLIFY_METRICS_HPP
#define QAMPLIFY_METRICS_HPP

#include <utility>
#include <vector>

namespace qamplify::metrics {

// Positive class = backorder = 1.
struct ConfusionMatrix {
  long long tp = 0, tn = 0, fp = 0, fn = 0;
  long long total() const { return tp + tn + fp + fn; }
};

ConfusionMatrix confusion(const std::vector<int> &labels,
                          const std::vector<int> &predictions);

struct ClassMetrics {
  double precision = 0, recall = 0, f1 = 0, specificity = 0, gmean = 0, iba = 0;
};

struct MetricsReport {
  double accuracy = 0.0;
  ClassMetrics per_class[2];
  ClassMetrics macro;
  double roc_auc = 0.0;
  bool has_roc_auc = false;
  double iba_alpha = 0.1;
  bool divide_by_zero = false;  // some rate had an empty denominator
};

// Confusion-derived metrics; gmean_c = sqrt(recall_c * specificity_c),
// iba_c = (1 + alpha*(recall_c - specificity_c)) * gmean_c^2.
// Zero-denominator rates are reported as 0 with the divide_by_zero flag.
MetricsReport classification_metrics(const ConfusionMatrix &cm,
                                     double alpha = 0.1);

// Rank-based (Mann-Whitney) AUC, ties counting one half.
double roc_auc(const std::vector<int> &labels, const std::vector<double> &scores);

// Empirical ROC curve: one point per distinct threshold plus the (0,0) and
// (1,1) endpoints; trapezoids over these points integrate to roc_auc.
std::vector<std::pair<double, double>> roc_points(
    const std::vector<int> &labels, const std::vector<double> &scores);

}  // namespace qamplify::metrics

#endif
