#include "qamplify/xai.hpp"

#include <cmath>

#include "qamplify/common.hpp"
#include "qamplify/linalg.hpp"
#include "qamplify/rng.hpp"

namespace qamplify::xai {

namespace {

std::vector<std::string> default_names(std::size_t m,
                                       const std::vector<std::string> &names) {
  if (!names.empty()) {
    if (names.size() != m) throw SchemaError("feature name count mismatch");
    return names;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

}  // namespace

Attribution shapley_exact(const ModelFn &model_fn,
                          const std::vector<double> &instance,
                          const std::vector<double> &background,
                          const std::vector<std::string> &names) {
  const std::size_t m = instance.size();
  if (m == 0) throw SchemaError("shapley: empty instance");
  if (m > 12) throw SchemaError("shapley: more than 12 features");
  if (background.size() != m) throw SchemaError("shapley: background size mismatch");

  // val(s) for every coalition mask, evaluated once
  const std::size_t n_masks = std::size_t{1} << m;
  std::vector<double> val(n_masks);
  std::vector<double> z(m);
  for (std::size_t mask = 0; mask < n_masks; ++mask) {
    for (std::size_t j = 0; j < m; ++j) {
      z[j] = (mask >> j) & 1 ? instance[j] : background[j];
    }
    val[mask] = model_fn(z);
    if (!std::isfinite(val[mask])) throw NumericError("shapley: non-finite model output");
  }

  // weight per coalition size: |s|! (m-|s|-1)! / m!
  std::vector<double> weight(m);
  for (std::size_t s = 0; s < m; ++s) {
    double w = 1.0;
    for (std::size_t i = 2; i <= s; ++i) w *= static_cast<double>(i);
    for (std::size_t i = 2; i <= m - s - 1; ++i) w *= static_cast<double>(i);
    for (std::size_t i = 2; i <= m; ++i) w /= static_cast<double>(i);
    weight[s] = w;
  }

  Attribution attr;
  attr.method = "shap_exact";
  attr.feature_names = default_names(m, names);
  attr.values.assign(m, 0.0);
  attr.base_value = val[0];
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    double phi = 0.0;
    for (std::size_t mask = 0; mask < n_masks; ++mask) {
      if (mask & bit) continue;
      const std::size_t s = static_cast<std::size_t>(__builtin_popcountll(mask));
      phi += weight[s] * (val[mask | bit] - val[mask]);
    }
    attr.values[j] = phi;
  }
  return attr;
}

Attribution lime_explain(const ModelFn &model_fn,
                         const std::vector<double> &instance,
                         const LimeConfig &config,
                         const std::vector<std::string> &names) {
  const std::size_t m = instance.size();
  if (m == 0) throw SchemaError("lime: empty instance");
  if (config.n_samples < static_cast<int>(m) + 1) {
    throw SchemaError("lime: n_samples must exceed feature count");
  }
  const double width = config.kernel_width > 0.0
                           ? config.kernel_width
                           : 0.75 * std::sqrt(static_cast<double>(m));

  Rng rng(config.seed);
  const std::size_t p = m + 1;  // intercept first
  linalg::Matrix xtwx(p, p);
  std::vector<double> xtwy(p, 0.0);
  std::vector<double> z(m), row(p);
  for (int s = 0; s < config.n_samples; ++s) {
    double dist2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double noise = rng.normal();
      z[j] = instance[j] + noise;
      dist2 += noise * noise;
    }
    const double w = std::exp(-dist2 / (width * width));
    const double y = model_fn(z);
    if (!std::isfinite(y)) throw NumericError("lime: non-finite model output");
    row[0] = 1.0;
    for (std::size_t j = 0; j < m; ++j) row[j + 1] = z[j];
    for (std::size_t a = 0; a < p; ++a) {
      xtwy[a] += w * row[a] * y;
      for (std::size_t b = a; b < p; ++b) xtwx(a, b) += w * row[a] * row[b];
    }
  }
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < a; ++b) xtwx(a, b) = xtwx(b, a);

  // reject a degenerate design before the pivot-skipping solver hides it
  double max_diag = 0.0, min_diag = std::abs(xtwx(0, 0));
  for (std::size_t a = 0; a < p; ++a) {
    max_diag = std::max(max_diag, std::abs(xtwx(a, a)));
    min_diag = std::min(min_diag, std::abs(xtwx(a, a)));
  }
  if (max_diag == 0.0 || min_diag < 1e-14 * max_diag) {
    throw NumericError("lime: singular weighted design");
  }

  const std::vector<double> beta = linalg::solve_linear(xtwx, xtwy);

  Attribution attr;
  attr.method = "lime";
  attr.feature_names = default_names(m, names);
  attr.base_value = beta[0];
  attr.values.assign(beta.begin() + 1, beta.end());
  return attr;
}

}  // namespace qamplify::xai
