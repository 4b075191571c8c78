// qamplify command-line tool. All heavy lifting happens behind the C API in
// libqamplify; this file is flag parsing, file I/O and printing.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qamplify.h"

namespace {

constexpr int kExitUsage = 2;

int fail(qam_status status) {
  std::cerr << "error: " << qam_last_error() << "\n";
  return status;
}

bool write_text(const std::string &path, const char *text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

std::optional<std::string> read_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

// env QAMPLIFY_SEED > --seed flag > config/default
bool resolve_seed(unsigned long long &seed, bool flag_given,
                  unsigned long long flag_value) {
  if (flag_given) seed = flag_value;
  if (const char *env = std::getenv("QAMPLIFY_SEED")) {
    char *end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (!end || *end != '\0' || end == env) {
      std::cerr << "error: QAMPLIFY_SEED is not an unsigned integer\n";
      return false;
    }
    seed = v;
  }
  return true;
}

// out/data.csv -> out/data.train.csv + out/data.test.csv
std::pair<std::string, std::string> split_paths(const std::string &out_data) {
  std::string stem = out_data;
  const std::string ext = ".csv";
  if (stem.size() > ext.size() &&
      stem.compare(stem.size() - ext.size(), ext.size(), ext) == 0) {
    stem.resize(stem.size() - ext.size());
  }
  return {stem + ".train.csv", stem + ".test.csv"};
}

struct OwnedString {
  char *ptr = nullptr;
  ~OwnedString() { qam_string_free(ptr); }
  char **slot() { return &ptr; }
  const char *get() const { return ptr ? ptr : ""; }
};

int run_preprocess(const std::string &input, const std::string &out_data,
                   const std::string &out_artifacts, unsigned long long seed) {
  OwnedString train_csv, test_csv, artifacts, summary;
  const qam_status st =
      qam_preprocess(input.c_str(), seed, train_csv.slot(), test_csv.slot(),
                     artifacts.slot(), summary.slot());
  if (st != QAM_OK) return fail(st);

  const auto [train_path, test_path] = split_paths(out_data);
  if (!write_text(train_path, train_csv.get()) ||
      !write_text(test_path, test_csv.get()) ||
      !write_text(out_artifacts, artifacts.get())) {
    std::cerr << "error: cannot write output files\n";
    return kExitUsage;
  }
  std::cout << "wrote " << train_path << ", " << test_path << ", "
            << out_artifacts << "\n"
            << summary.get();
  return 0;
}

int run_train(const std::string &data_path, const std::string &config_path,
              const std::string &model_path, const std::string &history_path,
              bool seed_given, unsigned long long seed_flag) {
  std::string config_text;
  if (!config_path.empty()) {
    auto text = read_text(config_path);
    if (!text) {
      std::cerr << "error: cannot read config " << config_path << "\n";
      return kExitUsage;
    }
    config_text = *text;
  }

  unsigned long long seed = 0;
  bool override_seed = seed_given || std::getenv("QAMPLIFY_SEED");
  if (!resolve_seed(seed, seed_given, seed_flag)) return kExitUsage;
  if (override_seed) {
    try {
      nlohmann::json cfg = config_text.empty()
                               ? nlohmann::json::object()
                               : nlohmann::json::parse(config_text);
      cfg["seed"] = seed;
      config_text = cfg.dump();
    } catch (const nlohmann::json::exception &e) {
      std::cerr << "error: invalid config json: " << e.what() << "\n";
      return kExitUsage;
    }
  }

  qam_frame *frame = nullptr;
  qam_status st = qam_frame_load_csv(data_path.c_str(), &frame);
  if (st != QAM_OK) return fail(st);

  qam_model *model = nullptr;
  OwnedString history, summary;
  st = qam_train(frame, config_text.empty() ? nullptr : config_text.c_str(),
                 &model, history.slot(), summary.slot());
  qam_frame_free(frame);
  if (st != QAM_OK) return fail(st);

  OwnedString model_json;
  st = qam_model_to_json(model, model_json.slot());
  qam_model_free(model);
  if (st != QAM_OK) return fail(st);

  if (!write_text(model_path, model_json.get()) ||
      !write_text(history_path, history.get())) {
    std::cerr << "error: cannot write output files\n";
    return kExitUsage;
  }
  std::cout << summary.get();
  return 0;
}

int run_evaluate(const std::string &model_path, const std::string &data_path,
                 const std::string &report_path, const std::string &roc_path) {
  qam_model *model = nullptr;
  qam_status st = qam_model_load(model_path.c_str(), &model);
  if (st != QAM_OK) return fail(st);

  qam_frame *frame = nullptr;
  st = qam_frame_load_csv(data_path.c_str(), &frame);
  if (st != QAM_OK) {
    qam_model_free(model);
    return fail(st);
  }

  OwnedString report, roc, summary;
  st = qam_evaluate(model, frame, report.slot(), roc.slot(), summary.slot());
  qam_model_free(model);
  qam_frame_free(frame);
  if (st != QAM_OK) return fail(st);

  if (!write_text(report_path, report.get())) {
    std::cerr << "error: cannot write " << report_path << "\n";
    return kExitUsage;
  }
  if (roc.ptr) {
    if (!write_text(roc_path, roc.get())) {
      std::cerr << "error: cannot write " << roc_path << "\n";
      return kExitUsage;
    }
  } else {
    std::cerr << "warning: AUC omitted (single-class data); no ROC csv written\n";
  }
  std::cout << summary.get();
  return 0;
}

int run_explain(const std::string &model_path, const std::string &data_path,
                std::size_t row, const std::string &method,
                const std::string &out_path, bool seed_given,
                unsigned long long seed_flag) {
  unsigned long long seed = 42;
  if (!resolve_seed(seed, seed_given, seed_flag)) return kExitUsage;

  qam_model *model = nullptr;
  qam_status st = qam_model_load(model_path.c_str(), &model);
  if (st != QAM_OK) return fail(st);
  qam_frame *frame = nullptr;
  st = qam_frame_load_csv(data_path.c_str(), &frame);
  if (st != QAM_OK) {
    qam_model_free(model);
    return fail(st);
  }

  OwnedString attribution, bars, plot_csv;
  st = qam_explain(model, frame, row, method.c_str(), seed, attribution.slot(),
                   bars.slot(), plot_csv.slot());
  qam_model_free(model);
  qam_frame_free(frame);
  if (st != QAM_OK) return fail(st);

  // attribution JSON plus a sibling CSV for external plotting
  std::string csv_path = out_path;
  const std::string ext = ".json";
  if (csv_path.size() > ext.size() &&
      csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0) {
    csv_path.resize(csv_path.size() - ext.size());
  }
  csv_path += ".csv";
  if (!write_text(out_path, attribution.get()) ||
      !write_text(csv_path, plot_csv.get())) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitUsage;
  }
  std::cout << bars.get();
  return 0;
}

int run_crossval(const std::string &data_path, int folds,
                 const std::string &against, const std::string &out_path,
                 bool seed_given, unsigned long long seed_flag) {
  unsigned long long seed = 42;
  if (!resolve_seed(seed, seed_given, seed_flag)) return kExitUsage;

  qam_frame *frame = nullptr;
  qam_status st = qam_frame_load_csv(data_path.c_str(), &frame);
  if (st != QAM_OK) return fail(st);

  OwnedString result;
  st = qam_crossval(frame, folds, against.c_str(), seed, result.slot());
  qam_frame_free(frame);
  if (st != QAM_OK) return fail(st);

  if (!write_text(out_path, result.get())) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitUsage;
  }
  std::cout << result.get();
  return 0;
}

int run_circuit(const std::string &weights_path, const std::string &input) {
  std::vector<double> values;
  std::stringstream ss(input);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char *end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (!end || end != item.c_str() + item.size() || item.empty()) {
      std::cerr << "error: cannot parse --input component '" << item << "'\n";
      return kExitUsage;
    }
    values.push_back(v);
  }
  if (values.size() != 4) {
    std::cerr << "error: --input needs 4 comma-separated reals\n";
    return kExitUsage;
  }

  std::string weights_text;
  if (!weights_path.empty()) {
    auto text = read_text(weights_path);
    if (!text) {
      std::cerr << "error: cannot read weights " << weights_path << "\n";
      return kExitUsage;
    }
    weights_text = *text;
  }

  OwnedString report;
  const qam_status st =
      qam_circuit(weights_text.empty() ? nullptr : weights_text.c_str(),
                  values.data(), values.size(), report.slot());
  if (st != QAM_OK) return fail(st);
  std::cout << report.get();
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"QAmplifyNet backorder prediction toolkit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string input, out_data, out_artifacts;
  unsigned long long seed = 42;
  auto *pre = app.add_subcommand(
      "preprocess", "Clean, transform, undersample and project a raw CSV "
                    "(writes <out-data stem>.train.csv and .test.csv)");
  pre->add_option("--input", input, "raw backorder CSV")->required();
  pre->add_option("--out-data", out_data, "output data path stem")->required();
  pre->add_option("--out-artifacts", out_artifacts, "artifacts JSON path")->required();
  pre->add_option("--seed", seed, "random seed");

  std::string data_path, config_path, model_path, history_path;
  unsigned long long train_seed = 42;
  auto *train = app.add_subcommand("train", "Train QAmplifyNet on a processed CSV");
  train->add_option("--data", data_path, "processed training CSV")->required();
  train->add_option("--config", config_path, "train config JSON");
  train->add_option("--model", model_path, "output model JSON")->required();
  train->add_option("--history", history_path, "output history CSV")->required();
  auto *train_seed_opt = train->add_option("--seed", train_seed, "random seed");

  std::string eval_model, eval_data, report_path, roc_path;
  auto *evaluate = app.add_subcommand("evaluate", "Evaluate a model on a processed CSV");
  evaluate->add_option("--model", eval_model, "model JSON")->required();
  evaluate->add_option("--data", eval_data, "processed CSV")->required();
  evaluate->add_option("--report", report_path, "output metrics JSON")->required();
  evaluate->add_option("--roc", roc_path, "output ROC points CSV")->required();

  std::string exp_model, exp_data, exp_method, exp_out;
  std::size_t exp_row = 0;
  unsigned long long exp_seed = 42;
  auto *explain = app.add_subcommand("explain", "Explain one prediction (shap or lime)");
  explain->add_option("--model", exp_model, "model JSON")->required();
  explain->add_option("--data", exp_data, "processed CSV")->required();
  explain->add_option("--row", exp_row, "row index")->required();
  explain->add_option("--method", exp_method, "shap | lime")->required();
  explain->add_option("--out", exp_out, "output attribution JSON")->required();
  auto *exp_seed_opt = explain->add_option("--seed", exp_seed, "random seed");

  std::string cv_data, cv_against = "logreg", cv_out;
  int cv_folds = 10;
  unsigned long long cv_seed = 42;
  auto *crossval = app.add_subcommand(
      "crossval", "Cross-validated paired t-test against a baseline");
  crossval->add_option("--data", cv_data, "processed CSV")->required();
  crossval->add_option("--folds", cv_folds, "fold count (>= 2)");
  crossval->add_option("--against", cv_against, "logreg | random | self");
  crossval->add_option("--out", cv_out, "output JSON")->required();
  auto *cv_seed_opt = crossval->add_option("--seed", cv_seed, "random seed");

  std::string circuit_weights, circuit_input;
  auto *circuit = app.add_subcommand("circuit", "Print circuit internals for 4 inputs");
  circuit->add_option("--weights", circuit_weights, "SEL weights JSON file");
  circuit->add_option("--input", circuit_input, "4 comma-separated reals")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  if (pre->parsed()) {
    unsigned long long s = seed;
    if (!resolve_seed(s, true, seed)) return kExitUsage;
    return run_preprocess(input, out_data, out_artifacts, s);
  }
  if (train->parsed()) {
    return run_train(data_path, config_path, model_path, history_path,
                     train_seed_opt->count() > 0, train_seed);
  }
  if (evaluate->parsed()) {
    return run_evaluate(eval_model, eval_data, report_path, roc_path);
  }
  if (explain->parsed()) {
    return run_explain(exp_model, exp_data, exp_row, exp_method, exp_out,
                       exp_seed_opt->count() > 0, exp_seed);
  }
  if (crossval->parsed()) {
    return run_crossval(cv_data, cv_folds, cv_against, cv_out,
                        cv_seed_opt->count() > 0, cv_seed);
  }
  if (circuit->parsed()) {
    return run_circuit(circuit_weights, circuit_input);
  }
  return kExitUsage;
}
