#include "qamplify.h"

#include <cstdlib>
#include <cstring>
#include <limits>
#include <string>

#include <json.hpp>

#include "qamplify/common.hpp"
#include "qamplify/csv.hpp"
#include "qamplify/io.hpp"
#include "qamplify/metrics.hpp"
#include "qamplify/model.hpp"
#include "qamplify/preprocess.hpp"
#include "qamplify/stats.hpp"
#include "qamplify/train.hpp"
#include "qamplify/xai.hpp"

using nlohmann::json;
using namespace qamplify;

struct qam_frame {
  nn::Dataset data;
  std::vector<std::string> feature_names;
  std::string content_hash;
};

struct qam_model {
  nn::HybridModel model;
  io::InputHashes hashes;
};

namespace {

thread_local std::string g_last_error;

char *alloc_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
qam_status guarded(Fn &&fn) {
  try {
    fn();
    g_last_error.clear();
    return QAM_OK;
  } catch (const SchemaError &e) {
    g_last_error = e.what();
    return QAM_ERR_USAGE;
  } catch (const DataError &e) {
    g_last_error = e.what();
    return QAM_ERR_DATA;
  } catch (const NumericError &e) {
    g_last_error = e.what();
    return QAM_ERR_NUMERIC;
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return QAM_ERR_NUMERIC;
  }
}

void require(bool cond, const char *message) {
  if (!cond) throw SchemaError(message);
}

nn::TrainConfig parse_train_config(const char *config_json) {
  nn::TrainConfig cfg;
  if (!config_json || !*config_json) return cfg;
  json doc;
  try {
    doc = json::parse(config_json);
  } catch (const json::exception &e) {
    throw SchemaError(std::string("invalid config json: ") + e.what());
  }
  try {
    cfg.learning_rate = doc.value("learning_rate", cfg.learning_rate);
    cfg.batch_size = doc.value("batch_size", cfg.batch_size);
    cfg.max_epochs = doc.value("max_epochs", cfg.max_epochs);
    cfg.patience = doc.value("patience", cfg.patience);
    cfg.validation_fraction = doc.value("validation_fraction", cfg.validation_fraction);
    cfg.seed = doc.value("seed", cfg.seed);
  } catch (const json::exception &e) {
    throw SchemaError(std::string("invalid config json: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace

extern "C" {

const char *qam_version(void) { return kVersion; }

const char *qam_last_error(void) { return g_last_error.c_str(); }

void qam_string_free(char *str) { std::free(str); }

qam_status qam_frame_load_csv(const char *path, qam_frame **out_frame) {
  return guarded([&] {
    require(path && out_frame, "qam_frame_load_csv: null argument");
    const std::string bytes = io::read_file(path);
    const io::CsvTable table = io::parse_csv(bytes);
    auto [data, names] = io::dataset_from_csv(table);
    auto *frame = new qam_frame;
    frame->data = std::move(data);
    frame->feature_names = std::move(names);
    frame->content_hash = io::fnv1a64_hex(bytes);
    *out_frame = frame;
  });
}

qam_status qam_frame_rows(const qam_frame *frame, size_t *out_rows) {
  return guarded([&] {
    require(frame && out_rows, "qam_frame_rows: null argument");
    *out_rows = frame->data.size();
  });
}

qam_status qam_frame_class_count(const qam_frame *frame, int label,
                                 size_t *out_count) {
  return guarded([&] {
    require(frame && out_count, "qam_frame_class_count: null argument");
    require(label == 0 || label == 1, "label must be 0 or 1");
    size_t n = 0;
    for (int y : frame->data.y) n += (y == label);
    *out_count = n;
  });
}

void qam_frame_free(qam_frame *frame) { delete frame; }

qam_status qam_preprocess(const char *input_csv_path, unsigned long long seed,
                          char **out_train_csv, char **out_test_csv,
                          char **out_artifacts_json, char **out_summary_json) {
  return guarded([&] {
    require(input_csv_path && out_train_csv && out_test_csv &&
                out_artifacts_json && out_summary_json,
            "qam_preprocess: null argument");
    const std::string bytes = io::read_file(input_csv_path);
    const io::CsvTable raw = io::parse_csv(bytes);

    pipeline::SamplingConfig config;
    config.seed = seed;
    const pipeline::PreprocessOutput out = pipeline::run_preprocess(raw, config);

    const io::InputHashes hashes{{"input", io::fnv1a64_hex(bytes)}};
    *out_train_csv = alloc_string(io::dataset_to_csv(out.feature_names, out.train));
    *out_test_csv = alloc_string(io::dataset_to_csv(out.feature_names, out.test));
    *out_artifacts_json = alloc_string(io::artifacts_to_json(out.artifacts, hashes));

    const json summary{
        {"train_rows", out.train.size()},
        {"test_rows", out.test.size()},
        {"train_class_counts", {out.train_class_counts[0], out.train_class_counts[1]}},
        {"test_class_counts", {out.test_class_counts[0], out.test_class_counts[1]}},
        {"kept_columns", out.artifacts.kept_columns},
        {"warnings", out.warnings},
        {"seed", seed}};
    *out_summary_json = alloc_string(summary.dump(2) + "\n");
  });
}

qam_status qam_train(const qam_frame *data, const char *config_json,
                     qam_model **out_model, char **out_history_csv,
                     char **out_summary_json) {
  return guarded([&] {
    require(data && out_model && out_history_csv && out_summary_json,
            "qam_train: null argument");
    require(data->data.x.cols() == 4, "training data must have 4 feature columns");
    const nn::TrainConfig cfg = parse_train_config(config_json);

    nn::HybridModel model = nn::HybridModel::make(cfg.seed);
    auto [trained, history] = nn::train(std::move(model), data->data, cfg);

    double best_val = std::numeric_limits<double>::infinity();
    for (double v : history.val_loss) best_val = std::min(best_val, v);

    auto *handle = new qam_model;
    handle->model = std::move(trained);
    handle->hashes = {{"data", data->content_hash}};
    *out_model = handle;
    *out_history_csv = alloc_string(history.to_csv());

    const json summary{{"stopped_epoch", history.stopped_epoch},
                       {"best_val_loss", best_val},
                       {"final_train_acc", history.train_acc.back()},
                       {"seed", cfg.seed}};
    *out_summary_json = alloc_string(summary.dump(2) + "\n");
  });
}

qam_status qam_model_to_json(const qam_model *model, char **out_json) {
  return guarded([&] {
    require(model && out_json, "qam_model_to_json: null argument");
    *out_json = alloc_string(io::model_to_json(model->model, model->hashes));
  });
}

qam_status qam_model_load(const char *path, qam_model **out_model) {
  return guarded([&] {
    require(path && out_model, "qam_model_load: null argument");
    const std::string bytes = io::read_file(path);
    auto *handle = new qam_model;
    handle->model = io::model_from_json(bytes);
    handle->hashes = {{"model", io::fnv1a64_hex(bytes)}};
    *out_model = handle;
  });
}

void qam_model_free(qam_model *model) { delete model; }

qam_status qam_evaluate(const qam_model *model, const qam_frame *data,
                        char **out_report_json, char **out_roc_csv,
                        char **out_summary_json) {
  return guarded([&] {
    require(model && data && out_report_json && out_roc_csv && out_summary_json,
            "qam_evaluate: null argument");
    if (data->data.x.cols() !=
        static_cast<std::size_t>(model->model.layers.front().in_dim)) {
      throw SchemaError("data feature count does not match the model input");
    }

    const std::size_t n = data->data.size();
    std::vector<double> scores(n);
    std::vector<int> preds(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = nn::forward(model->model, data->data.x.row(i));
      scores[i] = p[1];
      preds[i] = p[1] > p[0] ? 1 : 0;  // threshold = argmax of the pair
    }
    const metrics::ConfusionMatrix cm = metrics::confusion(data->data.y, preds);
    metrics::MetricsReport report = metrics::classification_metrics(cm);

    bool both_classes = cm.tp + cm.fn > 0 && cm.tn + cm.fp > 0;
    std::string roc_warning;
    if (both_classes) {
      report.roc_auc = metrics::roc_auc(data->data.y, scores);
      report.has_roc_auc = true;
      *out_roc_csv = alloc_string(
          io::roc_points_to_csv(metrics::roc_points(data->data.y, scores)));
    } else {
      roc_warning = "single-class data: AUC omitted";
      *out_roc_csv = nullptr;
    }

    io::InputHashes hashes = model->hashes;
    hashes["data"] = data->content_hash;
    *out_report_json = alloc_string(
        io::metrics_report_to_json(report, model->model.rng_seed, hashes));

    json summary{{"accuracy", report.accuracy},
                 {"tp", cm.tp},
                 {"tn", cm.tn},
                 {"fp", cm.fp},
                 {"fn", cm.fn}};
    if (report.has_roc_auc) summary["roc_auc"] = report.roc_auc;
    if (!roc_warning.empty()) summary["warnings"] = {roc_warning};
    *out_summary_json = alloc_string(summary.dump(2) + "\n");
  });
}

qam_status qam_explain(const qam_model *model, const qam_frame *data,
                       size_t row, const char *method, unsigned long long seed,
                       char **out_attribution_json, char **out_text_bars,
                       char **out_plot_csv) {
  return guarded([&] {
    require(model && data && method && out_attribution_json && out_text_bars,
            "qam_explain: null argument");
    require(row < data->data.size(), "row index out of range");
    const std::string method_name = method;
    require(method_name == "shap" || method_name == "lime",
            "method must be 'shap' or 'lime'");

    const xai::ModelFn fn = [&](const std::vector<double> &x) {
      return nn::forward(model->model, x)[1];  // p(backorder)
    };
    const std::vector<double> instance = data->data.x.row(row);

    xai::Attribution attribution;
    if (method_name == "shap") {
      // background = column means of the provided frame
      std::vector<double> background(data->data.x.cols(), 0.0);
      for (std::size_t r = 0; r < data->data.size(); ++r) {
        for (std::size_t c = 0; c < background.size(); ++c) {
          background[c] += data->data.x(r, c);
        }
      }
      for (double &b : background) b /= static_cast<double>(data->data.size());
      attribution = xai::shapley_exact(fn, instance, background, data->feature_names);
      attribution.method = "shap_exact";
    } else {
      xai::LimeConfig cfg;
      cfg.seed = seed;
      attribution = xai::lime_explain(fn, instance, cfg, data->feature_names);
    }

    io::InputHashes hashes = model->hashes;
    hashes["data"] = data->content_hash;
    *out_attribution_json = alloc_string(
        io::attribution_to_json(attribution, fn(instance), seed, hashes));
    *out_text_bars = alloc_string(io::attribution_bars(attribution));
    if (out_plot_csv) {
      std::string csv = "feature,value\n";
      for (std::size_t i = 0; i < attribution.values.size(); ++i) {
        csv += attribution.feature_names[i];
        csv += ',';
        csv += io::format_double(attribution.values[i]);
        csv += '\n';
      }
      *out_plot_csv = alloc_string(csv);
    }
  });
}

qam_status qam_crossval(const qam_frame *data, int folds, const char *against,
                        unsigned long long seed, char **out_result_json) {
  return guarded([&] {
    require(data && against && out_result_json, "qam_crossval: null argument");
    const std::string opponent = against;

    stats::ModelSpec a;
    a.kind = stats::ModelKind::QAmplifyNet;
    a.train.seed = seed;

    stats::ModelSpec b = a;
    if (opponent == "logreg") {
      b.kind = stats::ModelKind::Logistic;
    } else if (opponent == "random") {
      b.kind = stats::ModelKind::Random;
    } else if (opponent == "self") {
      b.kind = stats::ModelKind::QAmplifyNet;
    } else {
      throw SchemaError("unknown --against value: " + opponent);
    }

    const stats::CrossvalResult result =
        stats::crossval_compare(a, b, data->data, folds, seed);
    const io::InputHashes hashes{{"data", data->content_hash}};
    *out_result_json =
        alloc_string(io::crossval_to_json(result, opponent, folds, seed, hashes));
  });
}

qam_status qam_circuit(const char *weights_json, const double *inputs,
                       size_t n_inputs, char **out_report_text) {
  return guarded([&] {
    require(inputs && out_report_text, "qam_circuit: null argument");
    require(n_inputs == 4, "circuit expects exactly 4 inputs");

    quantum::SELWeights weights =
        weights_json && *weights_json
            ? io::sel_weights_from_json(weights_json)
            : quantum::SELWeights::zeros(1, 2);
    require(weights.n_qubits == 2, "circuit weights must be for 2 qubits");

    std::vector<double> v(inputs, inputs + n_inputs);
    bool all_zero = true;
    for (double x : v) all_zero = all_zero && x == 0.0;
    if (all_zero) throw SchemaError("input vector must not be all zero");

    const quantum::StateVector embedded = quantum::amplitude_embed(v, 2);
    const quantum::StateVector evolved = quantum::sel_circuit(embedded, weights);

    std::string text = "embedded statevector:\n";
    text += io::statevector_rows(embedded);
    text += "post-SEL statevector:\n";
    text += io::statevector_rows(evolved);
    for (int q = 0; q < 2; ++q) {
      text += "<Z" + std::to_string(q) + "> = ";
      text += io::format_double(quantum::expectation_z(evolved, q));
      text += '\n';
    }
    const auto probs =
        quantum::class_probabilities(quantum::expectation_z(evolved, 0));
    text += "P(not backorder) = " + io::format_double(probs.p_not_backorder) + '\n';
    text += "P(backorder) = " + io::format_double(probs.p_backorder) + '\n';
    *out_report_text = alloc_string(text);
  });
}

}  // extern "C"
