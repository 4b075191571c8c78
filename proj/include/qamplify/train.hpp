#ifndef QAMPLIFY_TRAIN_HPP
#define QAMPLIFY_TRAIN_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qamplify/linalg.hpp"
#include "qamplify/model.hpp"

namespace qamplify::nn {

struct Dataset {
  linalg::Matrix x;       // n_samples x n_features
  std::vector<int> y;     // 0/1 labels
  std::size_t size() const { return y.size(); }
};

struct TrainConfig {
  double learning_rate = 0.01;
  int batch_size = 5;
  int max_epochs = 100;
  int patience = 5;
  double validation_fraction = 0.2;
  std::uint64_t seed = 42;
  void validate() const;
};

struct TrainHistory {
  std::vector<double> train_loss, val_loss, train_acc, val_acc;
  int stopped_epoch = 0;
  std::string to_csv() const;
};

// Mean categorical cross-entropy of the true class over softmax pairs;
// probabilities are clipped to [1e-7, 1 - 1e-7] before the log.
double bce_loss(const std::vector<std::array<double, 2>> &predicted,
                const std::vector<int> &labels);

struct AdamState {
  std::vector<double> m, v;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

// One bias-corrected Adam update (beta1 0.9, beta2 0.999, eps 1e-8); t >= 1.
void adam_step(std::vector<double> &params, const std::vector<double> &grads,
               AdamState &moments, long t, double lr);

// Validation-loss early stopping with best-weight restoration bookkeeping.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}
  // Call once per epoch (1-based). Returns true when training should stop.
  bool update(int epoch, double val_loss);
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }

 private:
  int patience_ = 5;
  int bad_epochs_ = 0;
  int best_epoch_ = 0;
  double best_loss_ = 0.0;
  bool seen_any_ = false;
};

// Stratified validation split: exactly ceil(fraction * n) validation rows.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
stratified_validation_split(const std::vector<int> &labels, double fraction,
                            std::uint64_t seed);

// Trainable parameters = quantum angles + final dense layer, packed flat.
std::vector<double> pack_trainable(const HybridModel &model);
void unpack_trainable(HybridModel &model, const std::vector<double> &params);

// Mean gradient of bce_loss over the batch w.r.t. the packed trainables
// (analytic through softmax/head, parameter-shift through the circuit).
std::vector<double> trainable_gradient(const HybridModel &model,
                                       const Dataset &data,
                                       const std::vector<std::size_t> &batch);

std::pair<HybridModel, TrainHistory> train(HybridModel model,
                                           const Dataset &data,
                                           const TrainConfig &config);

struct LogisticModel {
  std::vector<double> weights;  // bias first
  double predict_proba(const std::vector<double> &x) const;
};

LogisticModel logistic_fit(const Dataset &train, int iterations = 1000,
                           double learning_rate = 0.5);

struct LogisticResult {
  std::vector<int> predictions;
  std::vector<double> probabilities;
  LogisticModel model;
};

LogisticResult logistic_regression(const Dataset &train, const Dataset &test,
                                   int iterations = 1000,
                                   double learning_rate = 0.5);

}  // namespace qamplify::nn

#endif
