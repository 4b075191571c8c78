#ifndef QAMPLIFY_XAI_HPP
#define QAMPLIFY_XAI_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qamplify::xai {

using ModelFn = std::function<double(const std::vector<double> &)>;

struct Attribution {
  std::vector<std::string> feature_names;
  std::vector<double> values;  // signed contribution toward the model output
  double base_value = 0.0;     // shap: f(background); lime: surrogate intercept
  std::string method;          // "shap_exact" | "lime"
};

// Exact Shapley values by full subset enumeration (m <= 12); out-of-coalition
// features are replaced by the background vector. Satisfies efficiency:
// base_value + sum(values) == f(instance).
Attribution shapley_exact(const ModelFn &model_fn,
                          const std::vector<double> &instance,
                          const std::vector<double> &background,
                          const std::vector<std::string> &names = {});

struct LimeConfig {
  int n_samples = 5000;
  double kernel_width = 0.0;  // <= 0 means the 0.75 * sqrt(m) default
  std::uint64_t seed = 42;
};

// Local linear surrogate: unit-normal perturbations around the instance,
// proximity-weighted least squares, no sparsity penalty.
Attribution lime_explain(const ModelFn &model_fn,
                         const std::vector<double> &instance,
                         const LimeConfig &config,
                         const std::vector<std::string> &names = {});

}  // namespace qamplify::xai

#endif
