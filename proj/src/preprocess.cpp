#include "qamplify/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>

#include "qamplify/common.hpp"
#include "qamplify/rng.hpp"

namespace qamplify::pipeline {

namespace {

std::string trim(const std::string &s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  for (char &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_missing_marker(const std::string &cell) {
  return cell.empty() || cell == "?" || cell == "NA" || lower(cell) == "nan";
}

double signed_log1p(double x) {
  return x >= 0.0 ? std::log1p(x) : -std::log1p(-x);
}

double project_entry(const linalg::Matrix &components,
                     const std::vector<double> &means,
                     const std::vector<double> &row, std::size_t component) {
  double acc = 0.0;
  for (std::size_t j = 0; j < means.size(); ++j) {
    acc += components(component, j) * (row[j] - means[j]);
  }
  return acc;
}

FeatureFrame take_rows(const FeatureFrame &frame,
                       const std::vector<std::size_t> &rows) {
  FeatureFrame out;
  out.column_names = frame.column_names;
  out.rows = linalg::Matrix(rows.size(), frame.n_cols());
  out.label.reserve(rows.size());
  out.row_ids.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < frame.n_cols(); ++c) {
      out.rows(r, c) = frame.rows(rows[r], c);
    }
    out.label.push_back(frame.label[rows[r]]);
    out.row_ids.push_back(frame.row_ids[rows[r]]);
  }
  return out;
}

// NearMiss-1 scores: mean Euclidean distance to the k nearest minority rows.
std::vector<double> nearmiss_scores(const FeatureFrame &frame,
                                    const std::vector<std::size_t> &majority,
                                    const std::vector<std::size_t> &minority,
                                    int k) {
  std::vector<double> scores(majority.size(), 0.0);
  std::vector<double> dists(minority.size());
  for (std::size_t mi = 0; mi < majority.size(); ++mi) {
    for (std::size_t ni = 0; ni < minority.size(); ++ni) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < frame.n_cols(); ++c) {
        const double d = frame.rows(majority[mi], c) - frame.rows(minority[ni], c);
        d2 += d * d;
      }
      dists[ni] = std::sqrt(d2);
    }
    std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
    double acc = 0.0;
    for (int i = 0; i < k; ++i) acc += dists[static_cast<std::size_t>(i)];
    scores[mi] = acc / k;
    // nth_element leaves dists permuted; recomputed next iteration
  }
  return scores;
}

// Indices into `majority` of the `keep` lowest-score rows, original order
// breaking ties.
std::vector<std::size_t> lowest_score_subset(const std::vector<double> &scores,
                                             std::size_t keep) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  order.resize(keep);
  return order;
}

}  // namespace

std::size_t FeatureFrame::count_label(int value) const {
  std::size_t n = 0;
  for (int y : label) n += (y == value);
  return n;
}

std::size_t FeatureFrame::column_index(const std::string &name) const {
  for (std::size_t i = 0; i < column_names.size(); ++i) {
    if (column_names[i] == name) return i;
  }
  throw SchemaError("column not found: " + name);
}

FeatureFrame clean(const io::CsvTable &raw) {
  std::size_t label_col = raw.column_index("went_on_backorder");
  if (label_col == io::CsvTable::npos) label_col = raw.column_index("went_to_backorder");
  if (label_col == io::CsvTable::npos) {
    throw SchemaError("label column 'went_on_backorder' not found");
  }
  const std::size_t sku_col = raw.column_index("sku");

  FeatureFrame frame;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < raw.header.size(); ++c) {
    if (c == label_col || c == sku_col) continue;
    feature_cols.push_back(c);
    frame.column_names.push_back(raw.header[c]);
  }

  const std::set<std::string> perf_columns = {
      "perf_6_month_avg", "perf_6_months_avg",
      "perf_12_month_avg", "perf_12_months_avg"};

  std::vector<double> values(feature_cols.size());
  std::vector<std::vector<double>> kept_rows;
  std::vector<int> labels;
  for (const auto &row : raw.rows) {
    bool drop = false;
    for (std::size_t i = 0; i < feature_cols.size() && !drop; ++i) {
      const std::string cell = trim(row[feature_cols[i]]);
      if (is_missing_marker(cell)) {
        drop = true;
        break;
      }
      const std::string lc = lower(cell);
      double v;
      if (lc == "yes") {
        v = 1.0;
      } else if (lc == "no") {
        v = 0.0;
      } else {
        char *end = nullptr;
        v = std::strtod(cell.c_str(), &end);
        if (end != cell.c_str() + cell.size()) {
          throw SchemaError("unparseable cell '" + cell + "' in column " +
                            frame.column_names[i]);
        }
        if (!std::isfinite(v)) {
          drop = true;
          break;
        }
      }
      if (v < 0.0 && perf_columns.count(frame.column_names[i])) {
        drop = true;
        break;
      }
      values[i] = v;
    }
    if (drop) continue;

    const std::string cell = trim(row[label_col]);
    if (is_missing_marker(cell)) continue;
    const std::string lc = lower(cell);
    int y;
    if (lc == "yes") {
      y = 1;
    } else if (lc == "no") {
      y = 0;
    } else if (cell == "1") {
      y = 1;
    } else if (cell == "0") {
      y = 0;
    } else {
      throw SchemaError("unparseable label '" + cell + "'");
    }
    kept_rows.push_back(values);
    labels.push_back(y);
  }

  frame.rows = linalg::Matrix(kept_rows.size(), feature_cols.size());
  for (std::size_t r = 0; r < kept_rows.size(); ++r) {
    for (std::size_t c = 0; c < feature_cols.size(); ++c) {
      frame.rows(r, c) = kept_rows[r][c];
    }
  }
  frame.label = std::move(labels);
  frame.row_ids.resize(frame.label.size());
  std::iota(frame.row_ids.begin(), frame.row_ids.end(), std::size_t{0});
  return frame;
}

std::vector<std::string> continuous_columns(const FeatureFrame &frame) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < frame.n_cols(); ++c) {
    bool binary = true;
    for (std::size_t r = 0; r < frame.n_rows() && binary; ++r) {
      const double v = frame.rows(r, c);
      binary = (v == 0.0 || v == 1.0);
    }
    if (!binary) out.push_back(frame.column_names[c]);
  }
  return out;
}

FeatureFrame signed_log_transform(FeatureFrame frame,
                                  const std::vector<std::string> *columns) {
  const std::vector<std::string> cols =
      columns ? *columns : continuous_columns(frame);
  for (const std::string &name : cols) {
    const std::size_t c = frame.column_index(name);
    for (std::size_t r = 0; r < frame.n_rows(); ++r) {
      frame.rows(r, c) = signed_log1p(frame.rows(r, c));
    }
  }
  // safeguard: drop any residual non-finite row
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < frame.n_rows(); ++r) {
    bool finite = true;
    for (std::size_t c = 0; c < frame.n_cols(); ++c) {
      finite = finite && std::isfinite(frame.rows(r, c));
    }
    if (finite) keep.push_back(r);
  }
  if (keep.size() == frame.n_rows()) return frame;
  return take_rows(frame, keep);
}

ScaleResult standard_scale(FeatureFrame frame) {
  if (frame.n_rows() < 2) throw DataError("standard_scale: need at least 2 rows");
  const std::vector<std::string> continuous = continuous_columns(frame);
  const std::set<std::string> continuous_set(continuous.begin(), continuous.end());

  ScaleResult result;
  std::vector<std::size_t> keep_cols;
  for (std::size_t c = 0; c < frame.n_cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < frame.n_rows(); ++r) mean += frame.rows(r, c);
    mean /= static_cast<double>(frame.n_rows());
    double var = 0.0;
    for (std::size_t r = 0; r < frame.n_rows(); ++r) {
      const double d = frame.rows(r, c) - mean;
      var += d * d;
    }
    var /= static_cast<double>(frame.n_rows());  // population convention
    const double std_dev = std::sqrt(var);

    if (std_dev < 1e-12) {
      result.dropped_constant.push_back(frame.column_names[c]);
      continue;
    }
    keep_cols.push_back(c);
    if (continuous_set.count(frame.column_names[c])) {
      for (std::size_t r = 0; r < frame.n_rows(); ++r) {
        frame.rows(r, c) = (frame.rows(r, c) - mean) / std_dev;
      }
      result.columns.push_back(frame.column_names[c]);
      result.means.push_back(mean);
      result.stds.push_back(std_dev);
    }
  }

  if (keep_cols.size() == frame.n_cols()) {
    result.frame = std::move(frame);
    return result;
  }
  FeatureFrame pruned;
  pruned.column_names.reserve(keep_cols.size());
  for (std::size_t c : keep_cols) pruned.column_names.push_back(frame.column_names[c]);
  pruned.rows = linalg::Matrix(frame.n_rows(), keep_cols.size());
  for (std::size_t r = 0; r < frame.n_rows(); ++r) {
    for (std::size_t i = 0; i < keep_cols.size(); ++i) {
      pruned.rows(r, i) = frame.rows(r, keep_cols[i]);
    }
  }
  pruned.label = frame.label;
  pruned.row_ids = frame.row_ids;
  result.frame = std::move(pruned);
  return result;
}

std::vector<double> compute_vif(const FeatureFrame &frame) {
  const std::size_t p = frame.n_cols();
  if (p < 2) throw DataError("compute_vif: need at least 2 columns");
  std::vector<double> vif(p, 1.0);
  for (std::size_t j = 0; j < p; ++j) {
    linalg::Matrix x(frame.n_rows(), p - 1);
    std::vector<double> y(frame.n_rows());
    for (std::size_t r = 0; r < frame.n_rows(); ++r) {
      std::size_t out = 0;
      for (std::size_t c = 0; c < p; ++c) {
        if (c == j) continue;
        x(r, out++) = frame.rows(r, c);
      }
      y[r] = frame.rows(r, j);
    }
    const double r2 = linalg::ols_r_squared(x, y);
    if (r2 >= 1.0 - 1e-12) {
      vif[j] = 1e12;  // perfect collinearity sentinel
    } else {
      vif[j] = std::max(1.0, 1.0 / (1.0 - r2));
    }
  }
  return vif;
}

VifSelection vif_select(FeatureFrame frame, double threshold) {
  if (frame.n_cols() == 0) throw DataError("vif_select: no columns");
  VifSelection sel;
  while (frame.n_cols() > 1) {
    const std::vector<double> vif = compute_vif(frame);
    std::size_t worst = 0;
    for (std::size_t j = 1; j < vif.size(); ++j) {
      if (vif[j] > vif[worst]) worst = j;  // ties keep the lowest index
    }
    if (vif[worst] <= threshold) break;
    sel.dropped.push_back(frame.column_names[worst]);

    FeatureFrame next;
    for (std::size_t c = 0; c < frame.n_cols(); ++c) {
      if (c != worst) next.column_names.push_back(frame.column_names[c]);
    }
    next.rows = linalg::Matrix(frame.n_rows(), frame.n_cols() - 1);
    for (std::size_t r = 0; r < frame.n_rows(); ++r) {
      std::size_t out = 0;
      for (std::size_t c = 0; c < frame.n_cols(); ++c) {
        if (c == worst) continue;
        next.rows(r, out++) = frame.rows(r, c);
      }
    }
    next.label = frame.label;
    next.row_ids = frame.row_ids;
    frame = std::move(next);
  }
  sel.kept = frame.column_names;
  sel.frame = std::move(frame);
  return sel;
}

FeatureFrame nearmiss_undersample(const FeatureFrame &frame,
                                  double target_ratio, int k) {
  const std::size_t n0 = frame.count_label(0);
  const std::size_t n1 = frame.count_label(1);
  if (n0 == 0 || n1 == 0) throw DataError("nearmiss: both classes required");
  const int minority_class = n1 <= n0 ? 1 : 0;

  std::vector<std::size_t> majority, minority;
  for (std::size_t r = 0; r < frame.n_rows(); ++r) {
    (frame.label[r] == minority_class ? minority : majority).push_back(r);
  }
  const std::size_t target = static_cast<std::size_t>(
      std::llround(target_ratio * static_cast<double>(minority.size())));
  if (majority.size() < target) {
    throw DataError("nearmiss: majority count below target ratio");
  }
  if (majority.size() == target) return frame;

  int k_eff = k;
  if (static_cast<std::size_t>(k_eff) > minority.size()) {
    k_eff = static_cast<int>(minority.size());
  }
  if (k_eff < 1) throw DataError("nearmiss: k must be >= 1");

  const std::vector<double> scores = nearmiss_scores(frame, majority, minority, k_eff);
  const std::vector<std::size_t> keep_positions = lowest_score_subset(scores, target);

  std::vector<std::size_t> keep_rows = minority;
  for (std::size_t pos : keep_positions) keep_rows.push_back(majority[pos]);
  std::sort(keep_rows.begin(), keep_rows.end());
  return take_rows(frame, keep_rows);
}

PcaResult pca_fit_transform(const FeatureFrame &train, const FeatureFrame &test,
                            int n_components) {
  const std::size_t p = train.n_cols();
  if (p < static_cast<std::size_t>(n_components)) {
    throw DataError("pca: fewer columns than components");
  }
  if (train.n_rows() < static_cast<std::size_t>(n_components)) {
    throw DataError("pca: fewer rows than components");
  }
  if (test.n_cols() != p) throw SchemaError("pca: train/test column mismatch");

  PcaResult res;
  res.means.assign(p, 0.0);
  for (std::size_t r = 0; r < train.n_rows(); ++r) {
    for (std::size_t c = 0; c < p; ++c) res.means[c] += train.rows(r, c);
  }
  for (double &m : res.means) m /= static_cast<double>(train.n_rows());

  linalg::Matrix cov(p, p);
  for (std::size_t r = 0; r < train.n_rows(); ++r) {
    for (std::size_t a = 0; a < p; ++a) {
      const double da = train.rows(r, a) - res.means[a];
      for (std::size_t b = a; b < p; ++b) {
        cov(a, b) += da * (train.rows(r, b) - res.means[b]);
      }
    }
  }
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b) {
      cov(a, b) /= static_cast<double>(train.n_rows());
      cov(b, a) = cov(a, b);
    }
  }

  const linalg::EigenResult eig = linalg::jacobi_eigen(cov);
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return eig.values[a] > eig.values[b];
  });

  res.components = linalg::Matrix(static_cast<std::size_t>(n_components), p);
  res.eigenvalues.resize(static_cast<std::size_t>(n_components));
  for (int c = 0; c < n_components; ++c) {
    const std::size_t src = order[static_cast<std::size_t>(c)];
    res.eigenvalues[static_cast<std::size_t>(c)] = eig.values[src];
    std::size_t peak = 0;
    for (std::size_t j = 0; j < p; ++j) {
      res.components(static_cast<std::size_t>(c), j) = eig.vectors(j, src);
      if (std::abs(eig.vectors(j, src)) > std::abs(eig.vectors(peak, src))) peak = j;
    }
    if (eig.vectors(peak, src) < 0.0) {
      for (std::size_t j = 0; j < p; ++j) {
        res.components(static_cast<std::size_t>(c), j) =
            -res.components(static_cast<std::size_t>(c), j);
      }
    }
  }

  auto transform = [&](const FeatureFrame &frame) {
    linalg::Matrix out(frame.n_rows(), static_cast<std::size_t>(n_components));
    for (std::size_t r = 0; r < frame.n_rows(); ++r) {
      const std::vector<double> row = frame.rows.row(r);
      for (int c = 0; c < n_components; ++c) {
        out(r, static_cast<std::size_t>(c)) =
            project_entry(res.components, res.means, row, static_cast<std::size_t>(c));
      }
    }
    return out;
  };
  res.train = transform(train);
  res.test = transform(test);
  return res;
}

Splits build_splits(const FeatureFrame &frame, const SamplingConfig &config) {
  const std::size_t n0 = frame.count_label(0);
  const std::size_t n1 = frame.count_label(1);
  if (n0 == 0 || n1 == 0) throw DataError("build_splits: both classes required");
  const int minority_class = n1 <= n0 ? 1 : 0;

  auto split_counts = [](std::size_t total, double ratio) {
    const std::size_t maj = static_cast<std::size_t>(
        std::llround(static_cast<double>(total) * ratio / (ratio + 1.0)));
    return std::pair<std::size_t, std::size_t>{maj, total - maj};
  };
  const auto [train_maj, train_min] = split_counts(config.train_size, config.train_majority_ratio);
  const auto [test_maj, test_min] = split_counts(config.test_size, config.test_majority_ratio);

  std::vector<std::size_t> majority, minority;
  for (std::size_t r = 0; r < frame.n_rows(); ++r) {
    (frame.label[r] == minority_class ? minority : majority).push_back(r);
  }
  if (minority.size() < train_min + test_min) {
    throw DataError("build_splits: insufficient minority samples (" +
                    std::to_string(minority.size()) + " < " +
                    std::to_string(train_min + test_min) + ")");
  }
  if (majority.size() < train_maj + test_maj) {
    throw DataError("build_splits: insufficient majority samples");
  }

  Rng rng(config.seed);
  rng.shuffle(minority);
  const std::vector<std::size_t> train_minority(minority.begin(),
                                                minority.begin() + static_cast<long>(train_min));
  const std::vector<std::size_t> test_minority(
      minority.begin() + static_cast<long>(train_min),
      minority.begin() + static_cast<long>(train_min + test_min));

  int k_eff = config.nearmiss_k;
  if (static_cast<std::size_t>(k_eff) > train_minority.size()) {
    k_eff = static_cast<int>(train_minority.size());
  }
  const std::vector<double> scores = nearmiss_scores(frame, majority, train_minority, k_eff);
  const std::vector<std::size_t> keep_positions = lowest_score_subset(scores, train_maj);

  std::vector<char> taken(majority.size(), 0);
  std::vector<std::size_t> train_rows = train_minority;
  for (std::size_t pos : keep_positions) {
    train_rows.push_back(majority[pos]);
    taken[pos] = 1;
  }

  std::vector<std::size_t> held_majority;
  for (std::size_t pos = 0; pos < majority.size(); ++pos) {
    if (!taken[pos]) held_majority.push_back(majority[pos]);
  }
  rng.shuffle(held_majority);
  std::vector<std::size_t> test_rows = test_minority;
  test_rows.insert(test_rows.end(), held_majority.begin(),
                   held_majority.begin() + static_cast<long>(test_maj));

  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {take_rows(frame, train_rows), take_rows(frame, test_rows)};
}

PreprocessOutput run_preprocess(const io::CsvTable &raw,
                                const SamplingConfig &config) {
  PreprocessOutput out;

  const FeatureFrame cleaned = clean(raw);
  if (cleaned.n_rows() == 0) throw DataError("no rows survive cleaning");

  FeatureFrame logged = signed_log_transform(cleaned);
  ScaleResult scaled = standard_scale(std::move(logged));
  for (const std::string &name : scaled.dropped_constant) {
    out.warnings.push_back("dropped constant column: " + name);
  }
  VifSelection selected = vif_select(std::move(scaled.frame), 5.0);

  const Splits splits = build_splits(selected.frame, config);
  const PcaResult pca = pca_fit_transform(splits.train, splits.test, 4);

  out.artifacts.kept_columns = selected.kept;
  // record scale parameters only for surviving continuous columns
  for (std::size_t i = 0; i < scaled.columns.size(); ++i) {
    const auto &kept = selected.kept;
    if (std::find(kept.begin(), kept.end(), scaled.columns[i]) != kept.end()) {
      out.artifacts.scaled_columns.push_back(scaled.columns[i]);
      out.artifacts.scaler_means.push_back(scaled.means[i]);
      out.artifacts.scaler_stds.push_back(scaled.stds[i]);
    }
  }
  out.artifacts.pca_means = pca.means;
  out.artifacts.pca_components = pca.components;
  out.artifacts.vif_threshold = 5.0;
  out.artifacts.sampling = config;

  for (int c = 1; c <= 4; ++c) out.feature_names.push_back("PC" + std::to_string(c));
  out.train.x = pca.train;
  out.train.y = splits.train.label;
  out.test.x = pca.test;
  out.test.y = splits.test.label;
  out.train_row_ids = splits.train.row_ids;
  out.test_row_ids = splits.test.row_ids;
  for (int y : out.train.y) ++out.train_class_counts[y];
  for (int y : out.test.y) ++out.test_class_counts[y];
  return out;
}

linalg::Matrix apply_artifacts(const PreprocessArtifacts &artifacts,
                               const FeatureFrame &cleaned) {
  const std::size_t k = artifacts.kept_columns.size();
  std::vector<std::size_t> src(k);
  std::vector<int> scale_slot(k, -1);
  for (std::size_t i = 0; i < k; ++i) {
    src[i] = cleaned.column_index(artifacts.kept_columns[i]);
    for (std::size_t s = 0; s < artifacts.scaled_columns.size(); ++s) {
      if (artifacts.scaled_columns[s] == artifacts.kept_columns[i]) {
        scale_slot[i] = static_cast<int>(s);
      }
    }
  }

  const std::size_t n_components = artifacts.pca_components.rows();
  linalg::Matrix out(cleaned.n_rows(), n_components);
  std::vector<double> row(k);
  for (std::size_t r = 0; r < cleaned.n_rows(); ++r) {
    for (std::size_t i = 0; i < k; ++i) {
      double v = cleaned.rows(r, src[i]);
      if (scale_slot[i] >= 0) {
        const std::size_t s = static_cast<std::size_t>(scale_slot[i]);
        v = (signed_log1p(v) - artifacts.scaler_means[s]) / artifacts.scaler_stds[s];
      }
      row[i] = v;
    }
    for (std::size_t c = 0; c < n_components; ++c) {
      out(r, c) = project_entry(artifacts.pca_components, artifacts.pca_means, row, c);
    }
  }
  return out;
}

}  // namespace qamplify::pipeline
