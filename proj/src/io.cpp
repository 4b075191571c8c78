#include "qamplify/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include <json.hpp>

#include "qamplify/common.hpp"
#include "qamplify/csv.hpp"

namespace qamplify::io {

using nlohmann::json;

namespace {

json provenance(std::uint64_t seed, const InputHashes &hashes) {
  json h = json::object();
  for (const auto &[k, v] : hashes) h[k] = v;
  return json{{"tool_version", kVersion}, {"seed", seed}, {"input_hashes", h}};
}

json sel_to_obj(const quantum::SELWeights &w) {
  json layers = json::array();
  for (int l = 0; l < w.layers; ++l) {
    json qubits = json::array();
    for (int q = 0; q < w.n_qubits; ++q) {
      qubits.push_back({w.at(l, q, 0), w.at(l, q, 1), w.at(l, q, 2)});
    }
    layers.push_back(qubits);
  }
  return json{{"n_qubits", w.n_qubits}, {"layers", w.layers}, {"angles", layers}};
}

quantum::SELWeights sel_from_obj(const json &obj) {
  try {
    const int layers = obj.at("layers").get<int>();
    const int n_qubits = obj.at("n_qubits").get<int>();
    quantum::SELWeights w = quantum::SELWeights::zeros(layers, n_qubits);
    const json &angles = obj.at("angles");
    if (static_cast<int>(angles.size()) != layers) {
      throw SchemaError("sel weights: layer count mismatch");
    }
    for (int l = 0; l < layers; ++l) {
      const json &row = angles.at(static_cast<std::size_t>(l));
      if (static_cast<int>(row.size()) != n_qubits) {
        throw SchemaError("sel weights: qubit count mismatch");
      }
      for (int q = 0; q < n_qubits; ++q) {
        const json &triple = row.at(static_cast<std::size_t>(q));
        if (triple.size() != 3) throw SchemaError("sel weights: need 3 angles");
        for (int k = 0; k < 3; ++k) {
          w.at(l, q, k) = triple.at(static_cast<std::size_t>(k)).get<double>();
        }
      }
    }
    w.validate();
    return w;
  } catch (const json::exception &e) {
    throw SchemaError(std::string("sel weights: ") + e.what());
  }
}

const char *kind_name(nn::LayerKind kind) {
  switch (kind) {
    case nn::LayerKind::Dense: return "DENSE";
    case nn::LayerKind::Relu: return "RELU";
    case nn::LayerKind::Quantum: return "QUANTUM";
    default: return "SOFTMAX";
  }
}

nn::LayerKind kind_from_name(const std::string &name) {
  if (name == "DENSE") return nn::LayerKind::Dense;
  if (name == "RELU") return nn::LayerKind::Relu;
  if (name == "QUANTUM") return nn::LayerKind::Quantum;
  if (name == "SOFTMAX") return nn::LayerKind::Softmax;
  throw SchemaError("unknown layer kind: " + name);
}

}  // namespace

std::string sel_weights_to_json(const quantum::SELWeights &weights) {
  return sel_to_obj(weights).dump(2) + "\n";
}

quantum::SELWeights sel_weights_from_json(const std::string &text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::exception &e) {
    throw SchemaError(std::string("invalid json: ") + e.what());
  }
  return sel_from_obj(obj);
}

std::string model_to_json(const nn::HybridModel &model,
                          const InputHashes &input_hashes) {
  json arch = json::array();
  for (const nn::LayerSpec &spec : model.layers) {
    arch.push_back({{"kind", kind_name(spec.kind)},
                    {"in_dim", spec.in_dim},
                    {"out_dim", spec.out_dim},
                    {"trainable", spec.trainable}});
  }
  json dense = json::object();
  for (const auto &[idx, w] : model.dense_weights) {
    dense[std::to_string(idx)] = {{"w", w.w.data()}, {"b", w.b}};
  }
  const json doc{{"architecture", arch},
                 {"dense_weights", dense},
                 {"quantum_weights", sel_to_obj(model.quantum_weights)},
                 {"seed", model.rng_seed},
                 {"preprocessing_artifact_ref", model.preprocessing_artifact_ref},
                 {"provenance", provenance(model.rng_seed, input_hashes)}};
  return doc.dump(2) + "\n";
}

nn::HybridModel model_from_json(const std::string &text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    throw SchemaError(std::string("invalid model json: ") + e.what());
  }
  try {
    nn::HybridModel model;
    for (const json &l : doc.at("architecture")) {
      model.layers.push_back({kind_from_name(l.at("kind").get<std::string>()),
                              l.at("in_dim").get<int>(),
                              l.at("out_dim").get<int>(),
                              l.at("trainable").get<bool>()});
    }
    for (const auto &[key, value] : doc.at("dense_weights").items()) {
      const int idx = std::stoi(key);
      if (idx < 0 || idx >= static_cast<int>(model.layers.size())) {
        throw SchemaError("dense weight index out of range: " + key);
      }
      const nn::LayerSpec &spec = model.layers[static_cast<std::size_t>(idx)];
      nn::DenseWeights w;
      w.w = linalg::Matrix(static_cast<std::size_t>(spec.out_dim),
                           static_cast<std::size_t>(spec.in_dim));
      const auto flat = value.at("w").get<std::vector<double>>();
      if (flat.size() != w.w.data().size()) {
        throw SchemaError("dense layer " + key + " weight size mismatch");
      }
      w.w.data() = flat;
      w.b = value.at("b").get<std::vector<double>>();
      model.dense_weights[idx] = std::move(w);
    }
    model.quantum_weights = sel_from_obj(doc.at("quantum_weights"));
    model.rng_seed = doc.at("seed").get<std::uint64_t>();
    model.preprocessing_artifact_ref =
        doc.value("preprocessing_artifact_ref", std::string{});
    model.validate();
    return model;
  } catch (const json::exception &e) {
    throw SchemaError(std::string("invalid model json: ") + e.what());
  }
}

std::string artifacts_to_json(const pipeline::PreprocessArtifacts &artifacts,
                              const InputHashes &input_hashes) {
  json components = json::array();
  for (std::size_t r = 0; r < artifacts.pca_components.rows(); ++r) {
    components.push_back(artifacts.pca_components.row(r));
  }
  const pipeline::SamplingConfig &s = artifacts.sampling;
  const json doc{
      {"kept_columns", artifacts.kept_columns},
      {"scaled_columns", artifacts.scaled_columns},
      {"scaler_means", artifacts.scaler_means},
      {"scaler_stds", artifacts.scaler_stds},
      {"pca_means", artifacts.pca_means},
      {"pca_components", components},
      {"vif_threshold", artifacts.vif_threshold},
      {"sampling",
       {{"nearmiss_k", s.nearmiss_k},
        {"train_majority_ratio", s.train_majority_ratio},
        {"test_majority_ratio", s.test_majority_ratio},
        {"train_size", s.train_size},
        {"test_size", s.test_size},
        {"seed", s.seed}}},
      {"provenance", provenance(s.seed, input_hashes)}};
  return doc.dump(2) + "\n";
}

pipeline::PreprocessArtifacts artifacts_from_json(const std::string &text) {
  try {
    const json doc = json::parse(text);
    pipeline::PreprocessArtifacts a;
    a.kept_columns = doc.at("kept_columns").get<std::vector<std::string>>();
    a.scaled_columns = doc.at("scaled_columns").get<std::vector<std::string>>();
    a.scaler_means = doc.at("scaler_means").get<std::vector<double>>();
    a.scaler_stds = doc.at("scaler_stds").get<std::vector<double>>();
    a.pca_means = doc.at("pca_means").get<std::vector<double>>();
    const json &components = doc.at("pca_components");
    a.pca_components = linalg::Matrix(components.size(), a.pca_means.size());
    for (std::size_t r = 0; r < components.size(); ++r) {
      const auto row = components.at(r).get<std::vector<double>>();
      if (row.size() != a.pca_means.size()) {
        throw SchemaError("artifacts: component width mismatch");
      }
      for (std::size_t c = 0; c < row.size(); ++c) a.pca_components(r, c) = row[c];
    }
    a.vif_threshold = doc.at("vif_threshold").get<double>();
    const json &s = doc.at("sampling");
    a.sampling.nearmiss_k = s.at("nearmiss_k").get<int>();
    a.sampling.train_majority_ratio = s.at("train_majority_ratio").get<double>();
    a.sampling.test_majority_ratio = s.at("test_majority_ratio").get<double>();
    a.sampling.train_size = s.at("train_size").get<std::size_t>();
    a.sampling.test_size = s.at("test_size").get<std::size_t>();
    a.sampling.seed = s.at("seed").get<std::uint64_t>();
    return a;
  } catch (const json::exception &e) {
    throw SchemaError(std::string("invalid artifacts json: ") + e.what());
  }
}

namespace {

json class_metrics_obj(const metrics::ClassMetrics &m) {
  return json{{"precision", m.precision}, {"recall", m.recall},
              {"f1", m.f1},               {"specificity", m.specificity},
              {"gmean", m.gmean},         {"iba", m.iba}};
}

json stat_result_obj(const stats::StatTestResult &r) {
  json obj{{"t", r.zero_variance ? json(nullptr) : json(r.t_statistic)},
           {"p", r.zero_variance ? json(nullptr) : json(r.p_value)},
           {"dof", r.degrees_of_freedom},
           {"fold_scores", {{"a", r.scores_a}, {"b", r.scores_b}}},
           {"zero_variance", r.zero_variance}};
  return obj;
}

}  // namespace

std::string metrics_report_to_json(const metrics::MetricsReport &report,
                                   std::uint64_t seed,
                                   const InputHashes &input_hashes) {
  const json doc{
      {"accuracy", report.accuracy},
      {"roc_auc", report.has_roc_auc ? json(report.roc_auc) : json(nullptr)},
      {"per_class",
       {{"0", class_metrics_obj(report.per_class[0])},
        {"1", class_metrics_obj(report.per_class[1])}}},
      {"macro", class_metrics_obj(report.macro)},
      {"iba_alpha", report.iba_alpha},
      {"divide_by_zero", report.divide_by_zero},
      {"provenance", provenance(seed, input_hashes)}};
  return doc.dump(2) + "\n";
}

std::string crossval_to_json(const stats::CrossvalResult &result,
                             const std::string &against, int folds,
                             std::uint64_t seed, const InputHashes &input_hashes) {
  const json doc{{"against", against},
                 {"folds", folds},
                 {"metrics",
                  {{"accuracy", stat_result_obj(result.accuracy)},
                   {"roc_auc", stat_result_obj(result.roc_auc)}}},
                 {"fold_assignment", result.fold_assignment},
                 {"provenance", provenance(seed, input_hashes)}};
  return doc.dump(2) + "\n";
}

std::string attribution_to_json(const xai::Attribution &attribution,
                                double model_output, std::uint64_t seed,
                                const InputHashes &input_hashes) {
  json features = json::array();
  for (std::size_t i = 0; i < attribution.values.size(); ++i) {
    features.push_back({{"name", attribution.feature_names[i]},
                        {"value", attribution.values[i]}});
  }
  const json doc{{"base_value", attribution.base_value},
                 {"features", features},
                 {"method", attribution.method},
                 {"model_output", model_output},
                 {"provenance", provenance(seed, input_hashes)}};
  return doc.dump(2) + "\n";
}

std::string roc_points_to_csv(const std::vector<std::pair<double, double>> &points) {
  std::string out = "fpr,tpr\n";
  for (const auto &[fpr, tpr] : points) {
    out += format_double(fpr);
    out += ',';
    out += format_double(tpr);
    out += '\n';
  }
  return out;
}

std::string dataset_to_csv(const std::vector<std::string> &feature_names,
                           const nn::Dataset &data) {
  std::string out;
  for (const std::string &name : feature_names) {
    out += name;
    out += ',';
  }
  out += "label\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < data.x.cols(); ++c) {
      out += format_double(data.x(r, c));
      out += ',';
    }
    out += std::to_string(data.y[r]);
    out += '\n';
  }
  return out;
}

std::pair<nn::Dataset, std::vector<std::string>> dataset_from_csv(
    const CsvTable &table) {
  if (table.header.size() < 2) throw SchemaError("dataset csv needs features and a label");
  if (table.header.back() != "label") {
    throw SchemaError("dataset csv: last column must be named 'label'");
  }
  const std::size_t n_features = table.header.size() - 1;
  std::vector<std::string> names(table.header.begin(), table.header.end() - 1);

  nn::Dataset data;
  data.x = linalg::Matrix(table.rows.size(), n_features);
  data.y.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < n_features; ++c) {
      const std::string &cell = table.rows[r][c];
      char *end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() + cell.size() || !std::isfinite(v)) {
        throw SchemaError("dataset csv: bad numeric cell '" + cell + "'");
      }
      data.x(r, c) = v;
    }
    const std::string &cell = table.rows[r].back();
    if (cell == "0") data.y.push_back(0);
    else if (cell == "1") data.y.push_back(1);
    else throw SchemaError("dataset csv: label must be 0/1, got '" + cell + "'");
  }
  return {std::move(data), std::move(names)};
}

std::string statevector_rows(const quantum::StateVector &state) {
  std::string out;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    out += std::to_string(i);
    out += " |";
    for (int q = state.n_qubits - 1; q >= 0; --q) {
      out += ((i >> q) & 1) ? '1' : '0';
    }
    out += "> ";
    out += format_double(state.amplitudes[i].real());
    out += ' ';
    out += format_double(state.amplitudes[i].imag());
    out += ' ';
    out += format_double(std::norm(state.amplitudes[i]));
    out += '\n';
  }
  return out;
}

std::string attribution_bars(const xai::Attribution &attribution) {
  double max_abs = 0.0;
  for (double v : attribution.values) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) max_abs = 1.0;

  std::vector<std::size_t> order(attribution.values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(attribution.values[a]) > std::abs(attribution.values[b]);
  });

  std::string out;
  for (std::size_t i : order) {
    const double v = attribution.values[i];
    const int len = static_cast<int>(std::round(std::abs(v) / max_abs * 24.0));
    out += attribution.feature_names[i];
    out += v < 0.0 ? "  -" : "  +";
    out += format_double(std::abs(v));
    out += "  ";
    for (int j = 0; j < len; ++j) out += '#';
    out += '\n';
  }
  return out;
}

}  // namespace qamplify::io
