#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "qamplify/common.hpp"
#include "qamplify/metrics.hpp"
#include "qamplify/rng.hpp"
#include "qamplify/stats.hpp"
#include "testdata.hpp"

using namespace qamplify;
using metrics::ConfusionMatrix;

namespace {

int percent(double v) { return static_cast<int>(std::llround(v * 100.0)); }

}  // namespace

TEST_CASE("confusion counting and validation") {
  const ConfusionMatrix cm = metrics::confusion({1, 0}, {1, 0});
  CHECK(cm.tp == 1);
  CHECK(cm.tn == 1);
  CHECK(cm.fp == 0);
  CHECK(cm.fn == 0);

  const ConfusionMatrix wrong = metrics::confusion({1, 0, 1}, {0, 1, 0});
  CHECK(wrong.tp == 0);
  CHECK(wrong.tn == 0);
  CHECK(wrong.fp == 1);
  CHECK(wrong.fn == 2);

  CHECK_THROWS_AS(metrics::confusion({1}, {1, 0}), SchemaError);
  CHECK_THROWS_AS(metrics::confusion({2}, {1}), SchemaError);
}

TEST_CASE("reported percentages reproduce from the reconstructed matrix") {
  // tp/tn/fp/fn reconstructed from the published rates on 267 samples
  const ConfusionMatrix cm{40, 200, 0, 27};
  const metrics::MetricsReport r = metrics::classification_metrics(cm);

  CHECK(percent(r.accuracy) == 90);
  CHECK(percent(r.per_class[0].precision) == 88);
  CHECK(percent(r.per_class[1].precision) == 100);
  CHECK(percent(r.per_class[0].recall) == 100);
  CHECK(percent(r.per_class[1].recall) == 60);
  CHECK(percent(r.per_class[0].f1) == 94);
  CHECK(percent(r.per_class[1].f1) == 75);
  CHECK(percent(r.per_class[0].specificity) == 60);
  CHECK(percent(r.per_class[1].specificity) == 100);
  CHECK(percent(r.per_class[0].gmean) == 77);
  CHECK(percent(r.per_class[1].gmean) == 77);
  CHECK(percent(r.per_class[0].iba) == 62);
  CHECK(percent(r.per_class[1].iba) == 57);

  CHECK(r.accuracy == doctest::Approx(0.898876404494382).epsilon(1e-12));
}

TEST_CASE("perfect classifier scores 1 everywhere") {
  const metrics::MetricsReport r =
      metrics::classification_metrics(ConfusionMatrix{30, 70, 0, 0});
  CHECK(r.accuracy == 1.0);
  for (int c = 0; c < 2; ++c) {
    CHECK(r.per_class[c].precision == 1.0);
    CHECK(r.per_class[c].recall == 1.0);
    CHECK(r.per_class[c].f1 == 1.0);
    CHECK(r.per_class[c].specificity == 1.0);
    CHECK(r.per_class[c].gmean == 1.0);
    CHECK(r.per_class[c].iba == 1.0);
  }
  CHECK_FALSE(r.divide_by_zero);
}

TEST_CASE("zero denominators flag instead of aborting") {
  const metrics::MetricsReport r =
      metrics::classification_metrics(ConfusionMatrix{0, 5, 0, 3});
  CHECK(r.per_class[1].precision == 0.0);
  CHECK(r.divide_by_zero);
  CHECK_THROWS_AS(metrics::classification_metrics(ConfusionMatrix{0, 0, 0, 0}),
                  DataError);
}

TEST_CASE("metric symmetries") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const ConfusionMatrix cm{static_cast<long long>(rng.integer(50)) + 1,
                             static_cast<long long>(rng.integer(50)) + 1,
                             static_cast<long long>(rng.integer(20)),
                             static_cast<long long>(rng.integer(20))};
    const metrics::MetricsReport r = metrics::classification_metrics(cm);
    // gmean symmetric under class swap
    CHECK(r.per_class[0].gmean == doctest::Approx(r.per_class[1].gmean).epsilon(1e-12));
    // macro F1 between the per-class F1s
    const double lo = std::min(r.per_class[0].f1, r.per_class[1].f1);
    const double hi = std::max(r.per_class[0].f1, r.per_class[1].f1);
    CHECK(r.macro.f1 >= lo - 1e-15);
    CHECK(r.macro.f1 <= hi + 1e-15);
    // iba with alpha=0 equals gmean^2
    const metrics::MetricsReport r0 = metrics::classification_metrics(cm, 0.0);
    for (int c = 0; c < 2; ++c) {
      CHECK(r0.per_class[c].iba ==
            doctest::Approx(r0.per_class[c].gmean * r0.per_class[c].gmean)
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("roc_auc fixtures") {
  CHECK(metrics::roc_auc({1, 1, 0, 0}, {0.9, 0.8, 0.3, 0.2}) == 1.0);
  CHECK(metrics::roc_auc({1, 0, 1, 0}, {0.5, 0.5, 0.5, 0.5}) == 0.5);
  CHECK_THROWS_AS(metrics::roc_auc({1, 1}, {0.5, 0.6}), DataError);
}

TEST_CASE("roc_auc equals brute-force pair counting exactly") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.integer(49);
    std::vector<int> labels(n);
    std::vector<double> scores(n);
    bool has0 = false, has1 = false;
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(rng.integer(2));
      // quantized scores force ties
      scores[i] = std::round(rng.uniform() * 8.0) / 8.0;
      (labels[i] ? has1 : has0) = true;
    }
    if (!has0 || !has1) {
      labels[0] = 0;
      labels[n - 1] = 1;
    }
    CHECK(metrics::roc_auc(labels, scores) ==
          oracles::pair_counting_auc(labels, scores));
  }
}

TEST_CASE("roc_auc is invariant under strictly increasing transforms") {
  Rng rng(43);
  std::vector<int> labels(40);
  std::vector<double> scores(40), warped(40);
  for (std::size_t i = 0; i < 40; ++i) {
    labels[i] = static_cast<int>(rng.integer(2));
    scores[i] = rng.uniform();
    warped[i] = std::exp(3.0 * scores[i]) + 1.0;
  }
  labels[0] = 0;
  labels[1] = 1;
  CHECK(metrics::roc_auc(labels, scores) == metrics::roc_auc(labels, warped));
}

TEST_CASE("roc_points endpoints, monotonicity and trapezoid consistency") {
  const std::vector<int> labels = {1, 1, 0, 0};
  const std::vector<double> perfect = {0.9, 0.8, 0.3, 0.2};
  auto pts = metrics::roc_points(labels, perfect);
  CHECK(pts.front() == std::pair<double, double>{0.0, 0.0});
  CHECK(pts.back() == std::pair<double, double>{1.0, 1.0});
  // perfect separation passes through (0, 1)
  bool corner = false;
  for (const auto &[fpr, tpr] : pts) corner = corner || (fpr == 0.0 && tpr == 1.0);
  CHECK(corner);

  Rng rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + rng.integer(60);
    std::vector<int> ys(n);
    std::vector<double> ss(n);
    for (std::size_t i = 0; i < n; ++i) {
      ys[i] = static_cast<int>(rng.integer(2));
      ss[i] = std::round(rng.uniform() * 6.0) / 6.0;
    }
    ys[0] = 0;
    ys[1] = 1;
    const auto points = metrics::roc_points(ys, ss);
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
      CHECK(points[i].first >= points[i - 1].first);
      CHECK(points[i].second >= points[i - 1].second);
      area += (points[i].first - points[i - 1].first) *
              (points[i].second + points[i - 1].second) / 2.0;
    }
    CHECK(area == doctest::Approx(metrics::roc_auc(ys, ss)).epsilon(1e-12));
  }
}

TEST_CASE("paired t-test on the 1..10 fixture") {
  std::vector<double> a(10), b(10, 0.0);
  for (int i = 0; i < 10; ++i) a[static_cast<std::size_t>(i)] = i + 1.0;

  const stats::StatTestResult res = stats::paired_ttest(a, b);
  CHECK(res.degrees_of_freedom == 9);
  CHECK(res.t_statistic == doctest::Approx(5.744562646538029).epsilon(1e-12));
  // frozen from the quadrature/scipy oracle
  CHECK(res.p_value == doctest::Approx(2.7819601104818586e-4).epsilon(1e-9));
  // independent quadrature oracle at 1e-10
  const double oracle_p = oracles::t_two_sided_p_quadrature(res.t_statistic, 9);
  CHECK(std::abs(res.p_value - oracle_p) < 1e-10);

  // antisymmetry
  const stats::StatTestResult swapped = stats::paired_ttest(b, a);
  CHECK(swapped.t_statistic == -res.t_statistic);
  CHECK(swapped.p_value == res.p_value);

  // zero variance flag
  const stats::StatTestResult zero = stats::paired_ttest(a, a);
  CHECK(zero.zero_variance);
  CHECK(std::isnan(zero.p_value));

  CHECK_THROWS_AS(stats::paired_ttest({1.0}, {2.0}), SchemaError);
}

TEST_CASE("incomplete beta agrees with quadrature across the t range") {
  for (double t : {0.5, 1.0, 2.5, 4.0, 8.0}) {
    for (int dof : {2, 5, 9, 17}) {
      const double p = stats::student_t_two_sided_p(t, dof);
      const double oracle = oracles::t_two_sided_p_quadrature(t, dof);
      CHECK(std::abs(p - oracle) < 1e-10);
    }
  }
}

TEST_CASE("crossval: identical folds, self-comparison flags zero variance") {
  const nn::Dataset data = testdata::separable_blobs(80, 21);

  stats::ModelSpec logreg;
  logreg.kind = stats::ModelKind::Logistic;
  logreg.train.seed = 3;

  const stats::CrossvalResult self =
      stats::crossval_compare(logreg, logreg, data, 5, 17);
  CHECK(self.accuracy.zero_variance);
  CHECK(self.roc_auc.zero_variance);
}

TEST_CASE("crossval: strong model beats random guessing significantly") {
  const nn::Dataset data = testdata::separable_blobs(120, 33);

  stats::ModelSpec logreg;
  logreg.kind = stats::ModelKind::Logistic;
  logreg.train.seed = 3;
  stats::ModelSpec random;
  random.kind = stats::ModelKind::Random;
  random.train.seed = 3;

  const stats::CrossvalResult res =
      stats::crossval_compare(logreg, random, data, 10, 29);
  CHECK_FALSE(res.accuracy.zero_variance);
  CHECK(res.accuracy.p_value < 0.05);
  CHECK(res.roc_auc.p_value < 0.05);
  CHECK(res.accuracy.t_statistic > 0.0);

  // fold assignment is shared and covers all folds
  std::vector<int> counts(10, 0);
  for (int f : res.fold_assignment) counts[static_cast<std::size_t>(f)]++;
  for (int c : counts) CHECK(c == 12);

  CHECK_THROWS_AS(stats::crossval_compare(logreg, random, data, 1, 3), SchemaError);
}
