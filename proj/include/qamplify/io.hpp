#ifndef QAMPLIFY_IO_HPP
#define QAMPLIFY_IO_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qamplify/metrics.hpp"
#include "qamplify/model.hpp"
#include "qamplify/preprocess.hpp"
#include "qamplify/stats.hpp"
#include "qamplify/xai.hpp"

namespace qamplify::io {

// Every emitted JSON document carries {tool_version, seed, input_hashes}.
using InputHashes = std::map<std::string, std::string>;

std::string sel_weights_to_json(const quantum::SELWeights &weights);
quantum::SELWeights sel_weights_from_json(const std::string &text);

std::string model_to_json(const nn::HybridModel &model,
                          const InputHashes &input_hashes);
nn::HybridModel model_from_json(const std::string &text);

std::string artifacts_to_json(const pipeline::PreprocessArtifacts &artifacts,
                              const InputHashes &input_hashes);
pipeline::PreprocessArtifacts artifacts_from_json(const std::string &text);

std::string metrics_report_to_json(const metrics::MetricsReport &report,
                                   std::uint64_t seed,
                                   const InputHashes &input_hashes);

std::string crossval_to_json(const stats::CrossvalResult &result,
                             const std::string &against, int folds,
                             std::uint64_t seed, const InputHashes &input_hashes);

std::string attribution_to_json(const xai::Attribution &attribution,
                                double model_output, std::uint64_t seed,
                                const InputHashes &input_hashes);

std::string roc_points_to_csv(const std::vector<std::pair<double, double>> &points);

std::string dataset_to_csv(const std::vector<std::string> &feature_names,
                           const nn::Dataset &data);
std::pair<nn::Dataset, std::vector<std::string>> dataset_from_csv(
    const CsvTable &table);

// "index basis-label re im prob" rows for a statevector.
std::string statevector_rows(const quantum::StateVector &state);

// Signed text bars for an attribution, largest magnitude first.
std::string attribution_bars(const xai::Attribution &attribution);

}  // namespace qamplify::io

#endif
