#include "qamplify/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qamplify/common.hpp"
#include "qamplify/csv.hpp"
#include "qamplify/rng.hpp"

namespace qamplify::nn {

namespace {

constexpr double kProbClip = 1e-7;

double clipped_log(double p) {
  return std::log(std::min(1.0 - kProbClip, std::max(kProbClip, p)));
}

int argmax2(const std::vector<double> &p) { return p[1] > p[0] ? 1 : 0; }

}  // namespace

void TrainConfig::validate() const {
  if (learning_rate <= 0.0) throw SchemaError("learning_rate must be > 0");
  if (batch_size < 1) throw SchemaError("batch_size must be >= 1");
  if (max_epochs < 1) throw SchemaError("max_epochs must be >= 1");
  if (patience < 1) throw SchemaError("patience must be >= 1");
  if (validation_fraction <= 0.0 || validation_fraction >= 1.0) {
    throw SchemaError("validation_fraction must be in (0, 1)");
  }
}

std::string TrainHistory::to_csv() const {
  std::string out = "epoch,train_loss,val_loss,train_acc,val_acc\n";
  for (std::size_t i = 0; i < train_loss.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += io::format_double(train_loss[i]);
    out += ',';
    out += io::format_double(val_loss[i]);
    out += ',';
    out += io::format_double(train_acc[i]);
    out += ',';
    out += io::format_double(val_acc[i]);
    out += '\n';
  }
  return out;
}

double bce_loss(const std::vector<std::array<double, 2>> &predicted,
                const std::vector<int> &labels) {
  if (predicted.size() != labels.size()) {
    throw SchemaError("bce_loss: length mismatch");
  }
  if (predicted.empty()) throw SchemaError("bce_loss: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int y = labels[i];
    if (y != 0 && y != 1) throw SchemaError("bce_loss: labels must be 0/1");
    acc -= clipped_log(predicted[i][static_cast<std::size_t>(y)]);
  }
  return acc / static_cast<double>(predicted.size());
}

void adam_step(std::vector<double> &params, const std::vector<double> &grads,
               AdamState &moments, long t, double lr) {
  if (params.size() != grads.size() || moments.m.size() != params.size()) {
    throw SchemaError("adam_step: shape mismatch");
  }
  if (t < 1) throw SchemaError("adam_step: t must be >= 1");
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    moments.m[i] = beta1 * moments.m[i] + (1.0 - beta1) * grads[i];
    moments.v[i] = beta2 * moments.v[i] + (1.0 - beta2) * grads[i] * grads[i];
    const double mhat = moments.m[i] / bc1;
    const double vhat = moments.v[i] / bc2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

bool EarlyStopping::update(int epoch, double val_loss) {
  if (!seen_any_ || val_loss < best_loss_) {
    seen_any_ = true;
    best_loss_ = val_loss;
    best_epoch_ = epoch;
    bad_epochs_ = 0;
    return false;
  }
  ++bad_epochs_;
  return bad_epochs_ >= patience_;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
stratified_validation_split(const std::vector<int> &labels, double fraction,
                            std::uint64_t seed) {
  const std::size_t n = labels.size();
  const std::size_t n_val =
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));

  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < n; ++i) {
    const int y = labels[i];
    if (y != 0 && y != 1) throw SchemaError("labels must be 0/1");
    by_class[y].push_back(i);
  }

  // floor per class, then hand out remainders by largest fractional part
  std::size_t take[2];
  double frac_part[2];
  std::size_t assigned = 0;
  for (int c = 0; c < 2; ++c) {
    const double exact = fraction * static_cast<double>(by_class[c].size());
    take[c] = static_cast<std::size_t>(std::floor(exact));
    take[c] = std::min(take[c], by_class[c].size());
    frac_part[c] = exact - std::floor(exact);
    assigned += take[c];
  }
  while (assigned < n_val) {
    int c = frac_part[1] > frac_part[0] ? 1 : 0;
    if (take[c] >= by_class[c].size()) c = 1 - c;
    ++take[c];
    frac_part[c] = -1.0;
    ++assigned;
  }
  while (assigned > n_val) {  // possible when a class saturated
    int c = take[0] > 0 ? 0 : 1;
    --take[c];
    --assigned;
  }

  Rng rng(seed);
  std::vector<std::size_t> val, tr;
  for (int c = 0; c < 2; ++c) {
    rng.shuffle(by_class[c]);
    for (std::size_t i = 0; i < by_class[c].size(); ++i) {
      (i < take[c] ? val : tr).push_back(by_class[c][i]);
    }
  }
  std::sort(val.begin(), val.end());
  std::sort(tr.begin(), tr.end());
  return {tr, val};
}

std::vector<double> pack_trainable(const HybridModel &model) {
  std::vector<double> out = model.quantum_weights.angles;
  for (int idx : model.trainable_dense_layers()) {
    const DenseWeights &d = model.dense_weights.at(idx);
    out.insert(out.end(), d.w.data().begin(), d.w.data().end());
    out.insert(out.end(), d.b.begin(), d.b.end());
  }
  return out;
}

void unpack_trainable(HybridModel &model, const std::vector<double> &params) {
  std::size_t pos = model.quantum_weights.angles.size();
  if (params.size() < pos) throw SchemaError("unpack_trainable: short vector");
  std::copy(params.begin(), params.begin() + static_cast<long>(pos),
            model.quantum_weights.angles.begin());
  for (int idx : model.trainable_dense_layers()) {
    DenseWeights &d = model.dense_weights.at(idx);
    for (double &w : d.w.data()) w = params.at(pos++);
    for (double &b : d.b) b = params.at(pos++);
  }
  if (pos != params.size()) throw SchemaError("unpack_trainable: size mismatch");
}

std::vector<double> trainable_gradient(const HybridModel &model,
                                       const Dataset &data,
                                       const std::vector<std::size_t> &batch) {
  if (batch.empty()) throw SchemaError("trainable_gradient: empty batch");
  const std::vector<int> head_layers = model.trainable_dense_layers();
  if (head_layers.size() != 1) {
    throw SchemaError("expected exactly one trainable dense layer");
  }
  const DenseWeights &head = model.dense_weights.at(head_layers[0]);
  const std::size_t n_q = model.quantum_weights.angles.size();
  const std::size_t n_w = head.w.rows() * head.w.cols();
  std::vector<double> grad(n_q + n_w + head.b.size(), 0.0);

  for (std::size_t s : batch) {
    const ForwardTrace trace = forward_trace(model, data.x.row(s));
    const int y = data.y[s];
    // d(loss)/d(logit) for cross-entropy on softmax = p - onehot(y)
    std::vector<double> dlogit = trace.probabilities;
    dlogit[static_cast<std::size_t>(y)] -= 1.0;

    std::size_t pos = n_q;
    for (std::size_t r = 0; r < head.w.rows(); ++r) {
      for (std::size_t c = 0; c < head.w.cols(); ++c) {
        grad[pos++] += dlogit[r] * trace.expectations[c];
      }
    }
    for (std::size_t r = 0; r < head.b.size(); ++r) grad[pos++] += dlogit[r];

    // chain into the circuit: d(loss)/d<Z_q> = W^T dlogit
    std::vector<double> dexp(trace.expectations.size(), 0.0);
    for (std::size_t c = 0; c < dexp.size(); ++c) {
      for (std::size_t r = 0; r < head.w.rows(); ++r) {
        dexp[c] += head.w(r, c) * dlogit[r];
      }
    }
    const auto qgrads = quantum::param_shift_grad_all(trace.quantum_input,
                                                      model.quantum_weights);
    for (std::size_t k = 0; k < n_q; ++k) {
      for (std::size_t q = 0; q < dexp.size(); ++q) {
        grad[k] += dexp[q] * qgrads[q][k];
      }
    }
  }
  for (double &g : grad) g /= static_cast<double>(batch.size());
  return grad;
}

namespace {

struct EpochStats {
  double loss = 0.0;
  double acc = 0.0;
};

EpochStats evaluate_subset(const HybridModel &model, const Dataset &data,
                           const std::vector<std::size_t> &idx) {
  std::vector<std::array<double, 2>> probs;
  std::vector<int> labels;
  probs.reserve(idx.size());
  std::size_t correct = 0;
  for (std::size_t i : idx) {
    const auto p = forward(model, data.x.row(i));
    probs.push_back({p[0], p[1]});
    labels.push_back(data.y[i]);
    if (argmax2(p) == data.y[i]) ++correct;
  }
  EpochStats st;
  st.loss = bce_loss(probs, labels);
  st.acc = static_cast<double>(correct) / static_cast<double>(idx.size());
  return st;
}

}  // namespace

std::pair<HybridModel, TrainHistory> train(HybridModel model,
                                           const Dataset &data,
                                           const TrainConfig &config) {
  config.validate();
  model.validate();
  if (data.x.rows() != data.y.size()) throw SchemaError("train: x/y mismatch");
  std::size_t per_class[2] = {0, 0};
  for (int y : data.y) {
    if (y != 0 && y != 1) throw SchemaError("train: labels must be 0/1");
    ++per_class[y];
  }
  if (per_class[0] < 2 || per_class[1] < 2) {
    throw DataError("train: need at least 2 samples per class");
  }

  auto [train_idx, val_idx] = stratified_validation_split(
      data.y, config.validation_fraction, config.seed);

  std::vector<double> params = pack_trainable(model);
  AdamState adam(params.size());
  long step = 0;

  EarlyStopping stopper(config.patience);
  std::vector<double> best_params = params;
  TrainHistory history;
  Rng shuffle_rng(config.seed + 1);

  int epoch = 0;
  for (epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle_rng.shuffle(train_idx);
    for (std::size_t start = 0; start < train_idx.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(
          train_idx.size(), start + static_cast<std::size_t>(config.batch_size));
      const std::vector<std::size_t> batch(train_idx.begin() + static_cast<long>(start),
                                           train_idx.begin() + static_cast<long>(stop));
      const std::vector<double> grad = trainable_gradient(model, data, batch);
      adam_step(params, grad, adam, ++step, config.learning_rate);
      unpack_trainable(model, params);
    }

    const EpochStats tr = evaluate_subset(model, data, train_idx);
    const EpochStats va = evaluate_subset(model, data, val_idx);
    if (!std::isfinite(tr.loss) || !std::isfinite(va.loss)) {
      throw NumericError("train: loss became non-finite");
    }
    history.train_loss.push_back(tr.loss);
    history.val_loss.push_back(va.loss);
    history.train_acc.push_back(tr.acc);
    history.val_acc.push_back(va.acc);

    const bool stop = stopper.update(epoch, va.loss);
    if (stopper.best_epoch() == epoch) best_params = params;
    if (stop) break;
  }

  history.stopped_epoch = std::min(epoch, config.max_epochs);
  unpack_trainable(model, best_params);
  return {std::move(model), std::move(history)};
}

double LogisticModel::predict_proba(const std::vector<double> &x) const {
  if (x.size() + 1 != weights.size()) {
    throw SchemaError("logistic: feature count mismatch");
  }
  double z = weights[0];
  for (std::size_t i = 0; i < x.size(); ++i) z += weights[i + 1] * x[i];
  return 1.0 / (1.0 + std::exp(-z));
}

LogisticModel logistic_fit(const Dataset &train, int iterations,
                           double learning_rate) {
  const std::size_t n = train.size();
  if (n == 0 || train.x.rows() != n) throw SchemaError("logistic_fit: bad data");
  bool seen[2] = {false, false};
  for (int y : train.y) {
    if (y != 0 && y != 1) throw SchemaError("logistic_fit: labels must be 0/1");
    seen[y] = true;
  }
  if (!seen[0] || !seen[1]) {
    throw DataError("logistic_fit: training data has a single class");
  }

  const std::size_t p = train.x.cols() + 1;
  LogisticModel m;
  m.weights.assign(p, 0.0);
  std::vector<double> grad(p);
  for (int it = 0; it < iterations; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double z = m.weights[0];
      for (std::size_t c = 0; c < train.x.cols(); ++c) {
        z += m.weights[c + 1] * train.x(i, c);
      }
      const double err = 1.0 / (1.0 + std::exp(-z)) - train.y[i];
      grad[0] += err;
      for (std::size_t c = 0; c < train.x.cols(); ++c) {
        grad[c + 1] += err * train.x(i, c);
      }
    }
    for (std::size_t k = 0; k < p; ++k) {
      m.weights[k] -= learning_rate * grad[k] / static_cast<double>(n);
    }
  }
  return m;
}

LogisticResult logistic_regression(const Dataset &train, const Dataset &test,
                                   int iterations, double learning_rate) {
  LogisticResult out;
  out.model = logistic_fit(train, iterations, learning_rate);
  out.probabilities.reserve(test.size());
  out.predictions.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double p = out.model.predict_proba(test.x.row(i));
    out.probabilities.push_back(p);
    out.predictions.push_back(p >= 0.5 ? 1 : 0);
  }
  return out;
}

}  // namespace qamplify::nn
