#include "qamplify/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qamplify/common.hpp"
#include "qamplify/metrics.hpp"
#include "qamplify/rng.hpp"

namespace qamplify::stats {

namespace {

// continued fraction for the incomplete beta (modified Lentz)
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericError("incomplete beta did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw SchemaError("incomplete beta: a, b must be > 0");
  if (x < 0.0 || x > 1.0) throw SchemaError("incomplete beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, int dof) {
  if (dof < 1) throw SchemaError("student t: dof must be >= 1");
  if (!std::isfinite(t)) throw NumericError("student t: non-finite statistic");
  const double nu = static_cast<double>(dof);
  const double x = nu / (nu + t * t);
  return regularized_incomplete_beta(nu / 2.0, 0.5, x);
}

StatTestResult paired_ttest(const std::vector<double> &a,
                            const std::vector<double> &b) {
  if (a.size() != b.size()) throw SchemaError("paired_ttest: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) throw SchemaError("paired_ttest: need at least 2 folds");

  StatTestResult res;
  res.scores_a = a;
  res.scores_b = b;
  res.degrees_of_freedom = static_cast<int>(n) - 1;

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  if (sd == 0.0) {
    res.zero_variance = true;
    res.t_statistic = 0.0;
    res.p_value = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  res.t_statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
  res.p_value = student_t_two_sided_p(res.t_statistic, res.degrees_of_freedom);
  return res;
}

namespace {

struct FoldScores {
  std::vector<double> accuracy;
  std::vector<double> auc;
};

FoldScores evaluate_model(const ModelSpec &spec, const nn::Dataset &data,
                          const std::vector<int> &fold_assignment, int folds,
                          std::uint64_t seed) {
  FoldScores out;
  for (int f = 0; f < folds; ++f) {
    nn::Dataset train, test;
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < data.size(); ++i) {
      (fold_assignment[i] == f ? test_rows : train_rows).push_back(i);
    }
    auto subset = [&](const std::vector<std::size_t> &rows) {
      nn::Dataset d;
      d.x = linalg::Matrix(rows.size(), data.x.cols());
      d.y.reserve(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < data.x.cols(); ++c) {
          d.x(r, c) = data.x(rows[r], c);
        }
        d.y.push_back(data.y[rows[r]]);
      }
      return d;
    };
    train = subset(train_rows);
    test = subset(test_rows);

    auto single_class = [](const std::vector<int> &y) {
      return std::all_of(y.begin(), y.end(), [&](int v) { return v == y[0]; });
    };
    if (single_class(train.y) || single_class(test.y)) {
      throw DataError("crossval: fold " + std::to_string(f) + " has a single class");
    }

    std::vector<double> scores(test.size());
    std::vector<int> preds(test.size());
    const std::uint64_t fold_seed = spec.train.seed + static_cast<std::uint64_t>(f);
    switch (spec.kind) {
      case ModelKind::QAmplifyNet: {
        nn::HybridModel model = nn::HybridModel::make(fold_seed);
        nn::TrainConfig cfg = spec.train;
        cfg.seed = fold_seed;
        auto [trained, history] = nn::train(std::move(model), train, cfg);
        (void)history;
        for (std::size_t i = 0; i < test.size(); ++i) {
          const auto p = nn::forward(trained, test.x.row(i));
          scores[i] = p[1];
          preds[i] = p[1] > p[0] ? 1 : 0;
        }
        break;
      }
      case ModelKind::Logistic: {
        const nn::LogisticResult lr = nn::logistic_regression(train, test);
        scores = lr.probabilities;
        preds = lr.predictions;
        break;
      }
      case ModelKind::Random: {
        Rng rng(seed ^ (0x9e3779b97f4a7c15ull + fold_seed));
        for (std::size_t i = 0; i < test.size(); ++i) {
          scores[i] = rng.uniform();
          preds[i] = scores[i] >= 0.5 ? 1 : 0;
        }
        break;
      }
    }

    const metrics::ConfusionMatrix cm = metrics::confusion(test.y, preds);
    out.accuracy.push_back(static_cast<double>(cm.tp + cm.tn) /
                           static_cast<double>(cm.total()));
    out.auc.push_back(metrics::roc_auc(test.y, scores));
  }
  return out;
}

}  // namespace

CrossvalResult crossval_compare(const ModelSpec &model_a, const ModelSpec &model_b,
                                const nn::Dataset &data, int folds,
                                std::uint64_t seed) {
  if (folds < 2) throw SchemaError("crossval: folds must be >= 2");
  if (data.size() < static_cast<std::size_t>(folds)) {
    throw DataError("crossval: fewer samples than folds");
  }

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);

  CrossvalResult res;
  res.fold_assignment.assign(data.size(), 0);
  const std::size_t base = data.size() / static_cast<std::size_t>(folds);
  const std::size_t extra = data.size() % static_cast<std::size_t>(folds);
  std::size_t pos = 0;
  for (int f = 0; f < folds; ++f) {
    const std::size_t len = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
    for (std::size_t i = 0; i < len; ++i) {
      res.fold_assignment[order[pos++]] = f;
    }
  }

  const FoldScores a = evaluate_model(model_a, data, res.fold_assignment, folds, seed);
  const FoldScores b = evaluate_model(model_b, data, res.fold_assignment, folds, seed);
  res.accuracy = paired_ttest(a.accuracy, b.accuracy);
  res.roc_auc = paired_ttest(a.auc, b.auc);
  return res;
}

}  // namespace qamplify::stats
