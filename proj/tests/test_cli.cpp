// End-to-end workflow check of the installed CLI binary. argv[1] = CLI path,
// argv[2] = scratch directory. Exercises every subcommand, the exit-code
// contract and byte-level rerun determinism.
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "qamplify/csv.hpp"
#include "testdata.hpp"

namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::string g_cli;
fs::path g_dir;

int run(const std::string &args) {
  const std::string cmd = g_cli + " " + args + " >> " +
                          (g_dir / "cli_log.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void expect(bool ok, const std::string &what) {
  if (!ok) {
    ++g_failures;
    std::cerr << "FAILED: " << what << "\n";
  }
}

void expect_exit(int got, int want, const std::string &what) {
  expect(got == want, what + " (exit " + std::to_string(got) + ", want " +
                          std::to_string(want) + ")");
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string q(const fs::path &p) { return "\"" + p.string() + "\""; }

}  // namespace

int main(int argc, char **argv) {
  if (argc < 3) {
    std::cerr << "usage: cli_workflow <cli-path> <scratch-dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_dir = fs::path(argv[2]) / "cli_workflow";
  fs::remove_all(g_dir);
  fs::create_directories(g_dir);

  // fixtures
  const fs::path raw = g_dir / "raw.csv";
  std::ofstream(raw) << testdata::synthetic_raw_csv(9000, 51);
  const fs::path blobs = g_dir / "blobs.csv";
  {
    const auto data = testdata::separable_blobs(80, 3);
    std::ofstream out(blobs);
    out << "PC1,PC2,PC3,PC4,label\n";
    for (std::size_t r = 0; r < data.size(); ++r) {
      for (std::size_t c = 0; c < 4; ++c) {
        out << qamplify::io::format_double(data.x(r, c)) << ',';
      }
      out << data.y[r] << '\n';
    }
  }
  const fs::path config = g_dir / "config.json";
  std::ofstream(config) << R"({"max_epochs": 10, "seed": 5, "patience": 3})";

  // preprocess: quoted sizes and rerun determinism
  const fs::path out_data = g_dir / "proc.csv";
  const fs::path artifacts = g_dir / "artifacts.json";
  expect_exit(run("preprocess --input " + q(raw) + " --out-data " + q(out_data) +
                  " --out-artifacts " + q(artifacts) + " --seed 7"),
              0, "preprocess");
  const fs::path train_csv = g_dir / "proc.train.csv";
  const fs::path test_csv = g_dir / "proc.test.csv";
  expect(fs::exists(train_csv) && fs::exists(test_csv) && fs::exists(artifacts),
         "preprocess outputs exist");
  const std::string train_bytes = slurp(train_csv);
  expect(static_cast<int>(std::count(train_bytes.begin(), train_bytes.end(), '\n')) ==
             1001,
         "train csv has 1000 rows");

  expect_exit(run("preprocess --input " + q(raw) + " --out-data " + q(out_data) +
                  " --out-artifacts " + q(artifacts) + " --seed 7"),
              0, "preprocess rerun");
  expect(slurp(train_csv) == train_bytes, "preprocess rerun is byte-identical");

  // schema error: missing label column
  const fs::path nolabel = g_dir / "nolabel.csv";
  std::ofstream(nolabel) << "a,b\n1,2\n";
  expect_exit(run("preprocess --input " + q(nolabel) + " --out-data " +
                  q(g_dir / "x.csv") + " --out-artifacts " + q(g_dir / "x.json")),
              2, "preprocess missing label exits 2");

  // train on the separable file, twice, byte-identical models
  const fs::path model = g_dir / "model.json";
  const fs::path history = g_dir / "history.csv";
  expect_exit(run("train --data " + q(blobs) + " --config " + q(config) +
                  " --model " + q(model) + " --history " + q(history)),
              0, "train");
  const std::string model_bytes = slurp(model);
  expect(model_bytes.find("\"architecture\"") != std::string::npos,
         "model json has architecture");
  expect_exit(run("train --data " + q(blobs) + " --config " + q(config) +
                  " --model " + q(model) + " --history " + q(history)),
              0, "train rerun");
  expect(slurp(model) == model_bytes, "train rerun is byte-identical");

  // malformed training data: wrong column count
  const fs::path wide = g_dir / "wide.csv";
  std::ofstream(wide) << "PC1,PC2,PC3,PC4,PC5,label\n1,2,3,4,5,0\n1,2,3,4,5,1\n";
  expect_exit(run("train --data " + q(wide) + " --model " + q(g_dir / "m.json") +
                  " --history " + q(g_dir / "h.csv")),
              2, "train rejects non-4-feature data");

  // evaluate
  const fs::path report = g_dir / "report.json";
  const fs::path roc = g_dir / "roc.csv";
  expect_exit(run("evaluate --model " + q(model) + " --data " + q(blobs) +
                  " --report " + q(report) + " --roc " + q(roc)),
              0, "evaluate");
  const std::string report_bytes = slurp(report);
  expect(report_bytes.find("\"accuracy\"") != std::string::npos, "report has accuracy");
  expect(slurp(roc).rfind("fpr,tpr", 0) == 0, "roc csv header");
  expect_exit(run("evaluate --model " + q(model) + " --data " + q(blobs) +
                  " --report " + q(report) + " --roc " + q(roc)),
              0, "evaluate rerun");
  expect(slurp(report) == report_bytes, "evaluate rerun is byte-identical");

  // single-class data: report still written, roc omitted
  const fs::path single = g_dir / "single.csv";
  {
    std::ofstream out(single);
    out << "PC1,PC2,PC3,PC4,label\n";
    for (int i = 0; i < 6; ++i) out << "0.1,0.2,0.3,0.4,0\n";
  }
  const fs::path roc2 = g_dir / "roc2.csv";
  expect_exit(run("evaluate --model " + q(model) + " --data " + q(single) +
                  " --report " + q(g_dir / "report2.json") + " --roc " + q(roc2)),
              0, "evaluate single-class");
  expect(!fs::exists(roc2), "no roc csv for single-class data");
  expect(slurp(g_dir / "report2.json").find("\"roc_auc\": null") != std::string::npos,
         "single-class AUC omitted");

  // explain: shap efficiency is checked by the acceptance suite; here the
  // contract is exit codes, file output and lime determinism
  const fs::path shap_out = g_dir / "shap.json";
  expect_exit(run("explain --model " + q(model) + " --data " + q(blobs) +
                  " --row 0 --method shap --out " + q(shap_out)),
              0, "explain shap");
  expect(slurp(shap_out).find("\"shap_exact\"") != std::string::npos,
         "shap json method tag");
  expect(slurp(g_dir / "shap.csv").rfind("feature,value", 0) == 0,
         "plotting csv written next to the attribution json");
  const fs::path lime_out = g_dir / "lime.json";
  expect_exit(run("explain --model " + q(model) + " --data " + q(blobs) +
                  " --row 2 --method lime --out " + q(lime_out) + " --seed 11"),
              0, "explain lime");
  const std::string lime_bytes = slurp(lime_out);
  expect_exit(run("explain --model " + q(model) + " --data " + q(blobs) +
                  " --row 2 --method lime --out " + q(lime_out) + " --seed 11"),
              0, "explain lime rerun");
  expect(slurp(lime_out) == lime_bytes, "lime rerun is byte-identical");
  expect_exit(run("explain --model " + q(model) + " --data " + q(blobs) +
                  " --row 0 --method foo --out " + q(g_dir / "bad.json")),
              2, "unknown method exits 2");
  expect_exit(run("explain --model " + q(model) + " --data " + q(blobs) +
                  " --row 99999 --method shap --out " + q(g_dir / "bad.json")),
              2, "bad row exits 2");

  // crossval: self-comparison flags zero variance; folds=1 exits 2
  const fs::path cv_out = g_dir / "cv.json";
  expect_exit(run("crossval --data " + q(blobs) + " --folds 3 --against self "
                  "--out " + q(cv_out) + " --seed 9"),
              0, "crossval self");
  expect(slurp(cv_out).find("\"zero_variance\": true") != std::string::npos,
         "self comparison zero variance");
  expect_exit(run("crossval --data " + q(blobs) + " --folds 1 --against logreg "
                  "--out " + q(cv_out)),
              2, "folds=1 exits 2");

  // crossval against the random baseline on separable data: p < 0.05
  const fs::path cv_rand = g_dir / "cv_rand.json";
  expect_exit(run("crossval --data " + q(blobs) + " --folds 4 --against random "
                  "--out " + q(cv_rand) + " --seed 13"),
              0, "crossval random");
  {
    const std::string text = slurp(cv_rand);
    const auto pos = text.find("\"p\":");
    expect(pos != std::string::npos, "crossval json has p");
    const double p = std::strtod(text.c_str() + pos + 4, nullptr);
    expect(p < 0.05, "QAmplifyNet beats random guessing (p=" + std::to_string(p) + ")");
  }

  // circuit fixtures
  expect_exit(run("circuit --input 1,0,0,0"), 0, "circuit basis input");
  expect_exit(run("circuit --input 0,0,0,0"), 2, "circuit zero vector exits 2");
  expect_exit(run("circuit --input 1,2,potato,4"), 2, "circuit parse error exits 2");

  // QAMPLIFY_SEED env var overrides the flag
  const fs::path env_out1 = g_dir / "env1.json";
  const fs::path env_out2 = g_dir / "env2.json";
  {
    const std::string base = "QAMPLIFY_SEED=21 " + g_cli + " explain --model " +
                             q(model) + " --data " + q(blobs) +
                             " --row 2 --method lime --seed 99 --out ";
    expect(std::system((base + q(env_out1) + " >/dev/null 2>&1").c_str()) == 0,
           "env-seeded run 1");
    expect(std::system((base + q(env_out2) + " >/dev/null 2>&1").c_str()) == 0,
           "env-seeded run 2");
    const std::string a = slurp(env_out1);
    expect(a == slurp(env_out2), "env-seeded runs identical");
    expect(a.find("\"seed\": 21") != std::string::npos, "env seed wins over flag");
    expect(a != lime_bytes, "env seed changes the output");
  }

  if (g_failures == 0) {
    std::cout << "cli workflow: all checks passed\n";
    return 0;
  }
  std::cout << "cli workflow: " << g_failures << " checks FAILED\n";
  return 1;
}
