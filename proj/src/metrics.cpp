#include "qamplify/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qamplify/common.hpp"

namespace qamplify::metrics {

ConfusionMatrix confusion(const std::vector<int> &labels,
                          const std::vector<int> &predictions) {
  if (labels.size() != predictions.size()) {
    throw SchemaError("confusion: length mismatch");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i], p = predictions[i];
    if ((y != 0 && y != 1) || (p != 0 && p != 1)) {
      throw SchemaError("confusion: values must be 0/1");
    }
    if (y == 1 && p == 1) ++cm.tp;
    else if (y == 0 && p == 0) ++cm.tn;
    else if (y == 0 && p == 1) ++cm.fp;
    else ++cm.fn;
  }
  return cm;
}

namespace {

double safe_rate(long long num, long long den, bool &flag) {
  if (den == 0) {
    flag = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

ClassMetrics metrics_for(long long tp, long long tn, long long fp, long long fn,
                         double alpha, bool &flag) {
  ClassMetrics m;
  m.precision = safe_rate(tp, tp + fp, flag);
  m.recall = safe_rate(tp, tp + fn, flag);
  m.specificity = safe_rate(tn, tn + fp, flag);
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  m.gmean = std::sqrt(m.recall * m.specificity);
  m.iba = (1.0 + alpha * (m.recall - m.specificity)) * m.gmean * m.gmean;
  return m;
}

}  // namespace

MetricsReport classification_metrics(const ConfusionMatrix &cm, double alpha) {
  if (cm.total() == 0) throw DataError("classification_metrics: empty matrix");
  if (cm.tp < 0 || cm.tn < 0 || cm.fp < 0 || cm.fn < 0) {
    throw SchemaError("classification_metrics: negative count");
  }
  MetricsReport r;
  r.iba_alpha = alpha;
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  // class 1 = backorder as given; class 0 swaps the positive class
  r.per_class[1] = metrics_for(cm.tp, cm.tn, cm.fp, cm.fn, alpha, r.divide_by_zero);
  r.per_class[0] = metrics_for(cm.tn, cm.tp, cm.fn, cm.fp, alpha, r.divide_by_zero);
  r.macro.precision = (r.per_class[0].precision + r.per_class[1].precision) / 2.0;
  r.macro.recall = (r.per_class[0].recall + r.per_class[1].recall) / 2.0;
  r.macro.f1 = (r.per_class[0].f1 + r.per_class[1].f1) / 2.0;
  r.macro.specificity = (r.per_class[0].specificity + r.per_class[1].specificity) / 2.0;
  r.macro.gmean = (r.per_class[0].gmean + r.per_class[1].gmean) / 2.0;
  r.macro.iba = (r.per_class[0].iba + r.per_class[1].iba) / 2.0;
  return r;
}

namespace {

void check_binary_scored(const std::vector<int> &labels,
                         const std::vector<double> &scores) {
  if (labels.size() != scores.size()) throw SchemaError("roc: length mismatch");
  if (labels.empty()) throw SchemaError("roc: empty input");
  bool seen[2] = {false, false};
  for (int y : labels) {
    if (y != 0 && y != 1) throw SchemaError("roc: labels must be 0/1");
    seen[y] = true;
  }
  if (!seen[0] || !seen[1]) throw DataError("roc: both classes required");
}

}  // namespace

double roc_auc(const std::vector<int> &labels, const std::vector<double> &scores) {
  check_binary_scored(labels, scores);
  const std::size_t n = labels.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // rank sum of positives with midranks on ties; ranks are half-integers so
  // the arithmetic below is exact in doubles
  double rank_sum_pos = 0.0;
  std::size_t n_pos = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        rank_sum_pos += midrank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  const double u = rank_sum_pos -
                   static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::vector<std::pair<double, double>> roc_points(
    const std::vector<int> &labels, const std::vector<double> &scores) {
  check_binary_scored(labels, scores);
  const std::size_t n = labels.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  long long n_pos = 0, n_neg = 0;
  for (int y : labels) (y == 1 ? n_pos : n_neg)++;

  std::vector<std::pair<double, double>> pts;
  pts.emplace_back(0.0, 0.0);
  long long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) {
      (labels[order[k]] == 1 ? tp : fp)++;
    }
    pts.emplace_back(static_cast<double>(fp) / static_cast<double>(n_neg),
                     static_cast<double>(tp) / static_cast<double>(n_pos));
    i = j;
  }
  return pts;
}

}  // namespace qamplify::metrics
