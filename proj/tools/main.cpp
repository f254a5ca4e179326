// Command-line front end: simulation, estimation, eigen analysis, two-sample
// testing, discriminant classification, and heatmap emission over CSV inputs.
// Every run prints its resolved configuration (seed included) to stdout, and
// all output files are pure functions of inputs, flags, and seed.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "slicecov/array_normal.hpp"
#include "slicecov/dataset.hpp"
#include "slicecov/errors.hpp"
#include "slicecov/flip_flop.hpp"
#include "slicecov/glasso.hpp"
#include "slicecov/linalg.hpp"
#include "slicecov/pgm.hpp"
#include "slicecov/rng.hpp"
#include "slicecov/slicing.hpp"
#include "slicecov/stats.hpp"

namespace {

using nlohmann::ordered_json;
using namespace slicecov;

constexpr std::uint64_t kDefaultSeed = 12345;

const char* kFetchInstructions = R"(External dataset: Alon et al. (1999) colon tissue microarray
----------------------------------------------------------------
The classification and two-sample examples expect the public colon cancer
expression matrix of Alon et al., PNAS 96(12):6745-6750 (1999): 62 tissue
samples (40 tumor, 22 normal) by 2000 genes.

Source: Princeton University Gene Expression Project,
  http://genomics-pubs.princeton.edu/oncology/affydata/index.html
  (files: I2000 gene expression matrix, tissues list)

Prepare a CSV for this tool as follows:
  - 62 data rows, one per tissue sample, in the original sample order
  - 2000 numeric columns holding the I2000 expression values for that sample
  - one extra column named "tissue" with the value "tumor" or "normal"
  - a header row naming every column (gene columns may use any names)

Then, for example:
  slicecov ftest --input alon.csv --label-column tissue --dims 40x50
  slicecov lda   --input alon.csv --label-column tissue --dims 40x50

The acceptance suite looks for this file at $SLICECOV_ALON_CSV and skips the
dataset-dependent checks when the variable is unset.)";

struct GlobalOptions {
  std::string out_dir = ".";
};

std::string out_path(const GlobalOptions& global, const std::string& name) {
  std::filesystem::create_directories(global.out_dir);
  return (std::filesystem::path(global.out_dir) / name).string();
}

void write_json(const std::string& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw DataError("write failed for " + path);
}

void echo_config(const ordered_json& resolved) {
  std::cout << "resolved-config: " << resolved.dump() << "\n";
}

std::vector<Index> parse_dims(const std::string& text) {
  std::vector<Index> dims;
  std::string token;
  for (char c : text + "x") {
    if (c == 'x' || c == 'X') {
      if (token.empty()) throw DimensionError("dims: expected m1xm2x... , got '" + text + "'");
      dims.push_back(static_cast<Index>(std::stoll(token)));
      token.clear();
    } else if (c >= '0' && c <= '9') {
      token.push_back(c);
    } else {
      throw DimensionError("dims: unexpected character in '" + text + "'");
    }
  }
  return dims;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) values.push_back(std::stod(token));
  }
  if (values.empty()) throw DimensionError("expected a comma-separated list, got '" + text + "'");
  return values;
}

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> values;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) values.push_back(static_cast<Index>(std::stoll(token)));
  }
  if (values.empty()) throw DimensionError("expected a comma-separated list, got '" + text + "'");
  return values;
}

std::vector<Index> load_permutation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open permutation file " + path);
  std::vector<Index> perm;
  long long v = 0;
  while (in >> v) perm.push_back(static_cast<Index>(v));
  return perm;
}

SlicingPlan make_plan(Index p, const std::string& dims_text,
                      const std::string& permutation_file) {
  SlicingPlan plan = dims_text.empty() ? balanced_two_way(p)
                                       : SlicingPlan{p, parse_dims(dims_text), {}};
  if (!permutation_file.empty()) plan.permutation = load_permutation(permutation_file);
  validate_plan(plan);
  return plan;
}

ModeDivisor parse_divisor(const std::string& name) {
  if (name == "mle") return ModeDivisor::kMle;
  if (name == "unbiased") return ModeDivisor::kUnbiased;
  throw DimensionError("divisor: expected mle or unbiased, got '" + name + "'");
}

struct FitOptions {
  std::string dims_text;
  std::string permutation_file;
  double tol = 1e-6;
  Index max_iter = 100;
  std::string divisor = "mle";
  std::string penalties_text;  // empty = plain fit
  double glasso_tol = 1e-8;
  Index glasso_max_iter = 500;
};

void add_fit_options(CLI::App* cmd, FitOptions& fit, bool with_penalties) {
  cmd->add_option("--dims", fit.dims_text,
                  "Slicing dimensions m1xm2x... (default: balanced two-way)");
  cmd->add_option("--permutation", fit.permutation_file,
                  "File of p whitespace-separated 0-based variable indices");
  cmd->add_option("--tol", fit.tol, "Convergence threshold on component change");
  cmd->add_option("--max-iter", fit.max_iter, "Sweep cap for the alternating fit");
  cmd->add_option("--divisor", fit.divisor, "Mode covariance divisor: mle|unbiased");
  if (with_penalties) {
    cmd->add_option("--penalties", fit.penalties_text,
                    "Per-mode L1 penalties rho1,rho2,... (one value broadcasts)");
    cmd->add_option("--glasso-tol", fit.glasso_tol, "Inner lasso stationarity tolerance");
    cmd->add_option("--glasso-max-iter", fit.glasso_max_iter, "Inner lasso sweep cap");
  }
}

FlipFlopConfig make_config(const FitOptions& fit, Index order) {
  FlipFlopConfig config;
  config.tol = fit.tol;
  config.max_iter = fit.max_iter;
  config.divisor = parse_divisor(fit.divisor);
  config.glasso_tol = fit.glasso_tol;
  config.glasso_max_iter = fit.glasso_max_iter;
  if (!fit.penalties_text.empty()) {
    config.penalties = parse_double_list(fit.penalties_text);
    if (config.penalties.size() == 1 && order > 1) {
      config.penalties.assign(static_cast<size_t>(order), config.penalties[0]);
    }
  }
  return config;
}

ordered_json plan_json(const SlicingPlan& plan) {
  ordered_json j;
  j["p"] = plan.p;
  j["dims"] = plan.dims;
  j["permuted"] = !plan.permutation.empty();
  return j;
}

ordered_json config_json(const FlipFlopConfig& config) {
  ordered_json j;
  j["tol"] = config.tol;
  j["max_iter"] = config.max_iter;
  j["divisor"] = config.divisor == ModeDivisor::kMle ? "mle" : "unbiased";
  if (!config.penalties.empty()) {
    j["penalties"] = config.penalties;
    j["glasso_tol"] = config.glasso_tol;
    j["glasso_max_iter"] = config.glasso_max_iter;
  }
  return j;
}

ordered_json report_json(const FitReport& report) {
  ordered_json j;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["changes"] = report.changes;
  j["log_likelihood"] = report.log_likelihood;
  j["log_likelihood_trace"] = report.log_likelihood_trace;
  return j;
}

void write_components(const ArrayNormalModel& model, const GlobalOptions& global) {
  for (size_t j = 0; j < model.components.size(); ++j) {
    save_matrix_csv(model.components[j],
                    out_path(global, "component_" + std::to_string(j + 1) + ".csv"));
  }
}

// ---------------------------------------------------------------------------
// simulate

ArrayNormalModel preset_model(const std::string& preset, const SlicingPlan& plan,
                              std::uint64_t seed) {
  ArrayNormalModel model;
  model.mean = Array(plan.dims);
  if (preset == "identity") {
    for (Index m : plan.dims) model.components.push_back(Matrix::Identity(m, m));
    return model;
  }
  if (preset == "kron") {
    for (size_t j = 0; j < plan.dims.size(); ++j) {
      const Index m = plan.dims[j];
      Rng rng = Rng::substream(seed, 1000 + static_cast<std::uint64_t>(j));
      Matrix b(m, m);
      for (Index r = 0; r < m; ++r) {
        for (Index c = 0; c < m; ++c) b(r, c) = rng.normal();
      }
      Matrix s = b * b.transpose() / static_cast<double>(m);
      s += 0.5 * Matrix::Identity(m, m);
      model.components.push_back(spd_sqrt(s));
    }
    return normalize_model(model);
  }
  if (preset == "unstructured") {
    // One-mode model over the flat vector: an arbitrary dense SPD covariance.
    const Index p = plan.p;
    Rng rng = Rng::substream(seed, 2000);
    Matrix b(p, p);
    for (Index r = 0; r < p; ++r) {
      for (Index c = 0; c < p; ++c) b(r, c) = rng.normal();
    }
    Matrix s = b * b.transpose() / static_cast<double>(p);
    s += 0.5 * Matrix::Identity(p, p);
    model.mean = Array({p});
    model.components.push_back(spd_sqrt(s));
    return model;
  }
  throw DimensionError("preset: expected identity, kron, or unstructured, got '" +
                       preset + "'");
}

int run_simulate(const GlobalOptions& global, const std::string& preset, Index p,
                 const std::string& dims_text, Index n, std::uint64_t seed) {
  SlicingPlan plan = dims_text.empty() ? balanced_two_way(p)
                                       : SlicingPlan{p, parse_dims(dims_text), {}};
  validate_plan(plan);
  ArrayNormalModel model = preset_model(preset, plan, seed);

  ordered_json resolved;
  resolved["command"] = "simulate";
  resolved["preset"] = preset;
  resolved["plan"] = plan_json(plan);
  resolved["N"] = n;
  resolved["seed"] = seed;
  resolved["out_dir"] = global.out_dir;
  echo_config(resolved);

  const std::vector<Array> draws = sample(model, seed, n);
  Matrix rows(n, plan.p);
  for (Index r = 0; r < n; ++r) rows.row(r) = rvec(draws[static_cast<size_t>(r)]);
  save_matrix_csv(rows, out_path(global, "samples.csv"));
  save_matrix_csv(full_covariance(model), out_path(global, "truth_covariance.csv"));
  std::cout << "wrote samples.csv (" << n << "x" << plan.p
            << ") and truth_covariance.csv\n";
  return 0;
}

// ---------------------------------------------------------------------------
// estimate / sparse-estimate

struct LoadOptions {
  std::string input;
  bool has_header = false;
  std::string label_column;
};

void add_load_options(CLI::App* cmd, LoadOptions& load, bool label_required) {
  cmd->add_option("--input", load.input, "Input CSV of observations")->required();
  cmd->add_flag("--has-header", load.has_header, "First CSV line is a header");
  auto* label = cmd->add_option("--label-column", load.label_column,
                                "Header name of the group label column");
  if (label_required) label->required();
}

Dataset load_dataset(const LoadOptions& load) {
  CsvOptions options;
  options.has_header = load.has_header || !load.label_column.empty();
  options.label_column = load.label_column;
  return load_csv(load.input, options);
}

int run_estimate(const GlobalOptions& global, const LoadOptions& load,
                 const FitOptions& fit, std::uint64_t seed, bool sparse) {
  const Dataset data = load_dataset(load);
  const SlicingPlan plan =
      make_plan(data.values.cols(), fit.dims_text, fit.permutation_file);
  FlipFlopConfig config = make_config(fit, static_cast<Index>(plan.dims.size()));
  if (sparse && config.penalties.empty()) {
    throw DimensionError("sparse-estimate: --penalties is required");
  }

  ordered_json resolved;
  resolved["command"] = sparse ? "sparse-estimate" : "estimate";
  resolved["plan"] = plan_json(plan);
  resolved["config"] = config_json(config);
  resolved["seed"] = seed;
  resolved["input"] = load.input;
  resolved["out_dir"] = global.out_dir;
  echo_config(resolved);

  const CovarianceEstimate est = estimate_sliced_covariance(data.values, plan, config);
  write_components(est.model, global);
  save_matrix_csv(unslice(std::span<const Array>(&est.model.mean, 1), plan),
                  out_path(global, "mean.csv"));
  for (size_t j = 0; j < est.report.sparse_thetas.size(); ++j) {
    save_matrix_csv(est.report.sparse_thetas[j],
                    out_path(global, "component_precision_" + std::to_string(j + 1) +
                                         ".csv"));
  }

  ordered_json report;
  report["command"] = sparse ? "sparse-estimate" : "estimate";
  report["plan"] = plan_json(plan);
  report["config"] = config_json(config);
  report["seed"] = seed;
  report["fit"] = report_json(est.report);
  write_json(out_path(global, "report.json"), report);
  std::cout << "fit " << (est.report.converged ? "converged" : "did not converge")
            << " after " << est.report.iterations << " sweeps\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eigen

int run_eigen_table(const GlobalOptions& global, const LoadOptions& load,
                    const FitOptions& fit, std::uint64_t seed, Index top) {
  const Dataset data = load_dataset(load);
  const SlicingPlan plan =
      make_plan(data.values.cols(), fit.dims_text, fit.permutation_file);
  const FlipFlopConfig config = make_config(fit, static_cast<Index>(plan.dims.size()));
  const Index k = top > 0 ? std::min<Index>(top, plan.p) : plan.p;

  ordered_json resolved;
  resolved["command"] = "eigen";
  resolved["plan"] = plan_json(plan);
  resolved["config"] = config_json(config);
  resolved["top"] = k;
  resolved["seed"] = seed;
  resolved["input"] = load.input;
  resolved["out_dir"] = global.out_dir;
  echo_config(resolved);

  const CovarianceEstimate est = estimate_sliced_covariance(data.values, plan, config);
  const SlicedEigen eig = sliced_eigen(est, k);

  std::ofstream out(out_path(global, "eigen.csv"), std::ios::binary);
  if (!out) throw DataError("cannot write eigen.csv");
  out << "rank,eigenvalue";
  for (size_t j = 0; j < plan.dims.size(); ++j) out << ",mode" << (j + 1) << "_index";
  out << "\n";
  for (Index r = 0; r < eig.count(); ++r) {
    out << (r + 1) << ',' << format_double(eig.value(r));
    for (Index idx : eig.indices()[static_cast<size_t>(r)]) out << ',' << idx;
    out << "\n";
  }
  if (!out) throw DataError("write failed for eigen.csv");
  std::cout << "wrote eigen.csv with " << eig.count() << " eigenvalues\n";
  return 0;
}

int run_eigen_sweep(const GlobalOptions& global, const std::string& preset, Index p,
                    const FitOptions& fit, const std::string& n_list_text,
                    Index replications, std::uint64_t seed) {
  SlicingPlan plan = fit.dims_text.empty()
                         ? balanced_two_way(p)
                         : SlicingPlan{p, parse_dims(fit.dims_text), {}};
  validate_plan(plan);
  const FlipFlopConfig config = make_config(fit, static_cast<Index>(plan.dims.size()));
  const std::vector<Index> n_list = parse_index_list(n_list_text);

  ordered_json resolved;
  resolved["command"] = "eigen";
  resolved["sweep"] = true;
  resolved["preset"] = preset;
  resolved["plan"] = plan_json(plan);
  resolved["config"] = config_json(config);
  resolved["N_list"] = n_list;
  resolved["replications"] = replications;
  resolved["seed"] = seed;
  resolved["out_dir"] = global.out_dir;
  echo_config(resolved);

  const ArrayNormalModel truth = preset_model(preset, plan, seed);
  std::vector<double> truth_values = kron_eigen(truth).all_values();
  std::sort(truth_values.begin(), truth_values.end(), std::greater<>());

  std::vector<EigencurvePoint> points;
  for (Index rep = 1; rep <= replications; ++rep) {
    for (Index n : n_list) {
      const std::uint64_t stream =
          static_cast<std::uint64_t>(rep) * 1000003ULL + static_cast<std::uint64_t>(n);
      const std::uint64_t draw_seed = splitmix64(splitmix64(seed) ^ stream);
      const std::vector<Array> draws = sample(truth, draw_seed, n);
      auto [model, report] = flip_flop(draws, config);
      std::vector<double> est_values = kron_eigen(model).all_values();
      std::sort(est_values.begin(), est_values.end(), std::greater<>());
      for (Index e = 0; e < plan.p; ++e) {
        points.push_back(EigencurvePoint{rep, n, e + 1,
                                         est_values[static_cast<size_t>(e)],
                                         truth_values[static_cast<size_t>(e)]});
      }
    }
  }
  save_eigencurve_csv(points, out_path(global, "eigencurve.csv"));
  std::cout << "wrote eigencurve.csv with " << points.size() << " rows\n";
  return 0;
}

// ---------------------------------------------------------------------------
// ftest / lda

struct Groups {
  TwoSampleData data;
  std::string label1;
  std::string label2;
  std::vector<Index> group_of_row;  // 1 or 2 per original row
};

Groups split_groups(const Dataset& data, const std::string& group1_label) {
  if (data.labels.empty()) {
    throw DataError("grouping requires --label-column");
  }
  std::vector<std::string> distinct;
  for (const std::string& label : data.labels) {
    if (std::find(distinct.begin(), distinct.end(), label) == distinct.end()) {
      distinct.push_back(label);
    }
  }
  if (distinct.size() != 2) {
    throw DataError("grouping: expected exactly 2 distinct labels, found " +
                    std::to_string(distinct.size()));
  }
  std::string label1 = distinct[0];
  if (!group1_label.empty()) {
    if (group1_label != distinct[0] && group1_label != distinct[1]) {
      throw DataError("grouping: label '" + group1_label + "' not present");
    }
    label1 = group1_label;
  }
  const std::string label2 = label1 == distinct[0] ? distinct[1] : distinct[0];

  std::vector<Index> rows1;
  std::vector<Index> rows2;
  std::vector<Index> group_of_row;
  for (size_t r = 0; r < data.labels.size(); ++r) {
    if (data.labels[r] == label1) {
      rows1.push_back(static_cast<Index>(r));
      group_of_row.push_back(1);
    } else {
      rows2.push_back(static_cast<Index>(r));
      group_of_row.push_back(2);
    }
  }
  Matrix g1(static_cast<Index>(rows1.size()), data.values.cols());
  Matrix g2(static_cast<Index>(rows2.size()), data.values.cols());
  for (size_t r = 0; r < rows1.size(); ++r) g1.row(static_cast<Index>(r)) = data.values.row(rows1[r]);
  for (size_t r = 0; r < rows2.size(); ++r) g2.row(static_cast<Index>(r)) = data.values.row(rows2[r]);
  return Groups{TwoSampleData{std::move(g1), std::move(g2)}, label1, label2,
                std::move(group_of_row)};
}

Matrix stack(const TwoSampleData& data) {
  Matrix all(data.n(), data.p());
  all.topRows(data.n1()) = data.group1;
  all.bottomRows(data.n2()) = data.group2;
  return all;
}

int run_ftest(const GlobalOptions& global, const LoadOptions& load,
              const FitOptions& fit, const std::string& group1_label, Index rank,
              std::uint64_t seed) {
  const Dataset dataset = load_dataset(load);
  const Groups groups = split_groups(dataset, group1_label);
  const SlicingPlan plan =
      make_plan(dataset.values.cols(), fit.dims_text, fit.permutation_file);
  const FlipFlopConfig config = make_config(fit, static_cast<Index>(plan.dims.size()));

  ordered_json resolved;
  resolved["command"] = "ftest";
  resolved["plan"] = plan_json(plan);
  resolved["config"] = config_json(config);
  resolved["group1"] = groups.label1;
  resolved["group2"] = groups.label2;
  if (rank > 0) resolved["rank"] = rank;
  resolved["seed"] = seed;
  resolved["input"] = load.input;
  resolved["out_dir"] = global.out_dir;
  echo_config(resolved);

  const CovarianceEstimate est =
      estimate_sliced_covariance(stack(groups.data), plan, config);
  const std::optional<Index> rank_override =
      rank > 0 ? std::optional<Index>(rank) : std::nullopt;
  const FPlusResult result = f_plus_test(groups.data, est, rank_override);

  ordered_json report;
  report["command"] = "ftest";
  report["statistic"] = result.statistic;
  report["df1"] = result.df1;
  report["df2"] = result.df2;
  report["p_value"] = result.p_value;
  report["n1"] = groups.data.n1();
  report["n2"] = groups.data.n2();
  report["p"] = groups.data.p();
  report["group1"] = groups.label1;
  report["group2"] = groups.label2;
  report["plan"] = plan_json(plan);
  report["config"] = config_json(config);
  report["seed"] = seed;
  report["fit"] = report_json(est.report);
  write_json(out_path(global, "ftest.json"), report);
  std::cout << "statistic " << format_double(result.statistic) << ", p-value "
            << format_double(result.p_value) << "\n";
  return 0;
}

int run_lda(const GlobalOptions& global, const LoadOptions& load, const FitOptions& fit,
            const std::string& group1_label, Index top_k, std::uint64_t seed) {
  const Dataset dataset = load_dataset(load);
  const Groups groups = split_groups(dataset, group1_label);
  const bool sparse = top_k > 0;

  SlicingPlan plan;
  FlipFlopConfig config;
  Vector w;
  double rate = 0.0;
  std::vector<Index> selected;
  Matrix reduced_all;
  const FitReport* fit_report = nullptr;

  ordered_json resolved;
  resolved["command"] = "lda";

  CovarianceEstimate est;
  SparseLdaResult sparse_result;
  if (sparse) {
    plan = make_plan(top_k, fit.dims_text, fit.permutation_file);
    config = make_config(fit, static_cast<Index>(plan.dims.size()));
    if (config.penalties.empty()) {
      throw DimensionError("lda: --top-k requires --penalties");
    }
    sparse_result = sparse_lda_pipeline(groups.data, plan, config);
    w = sparse_result.w;
    rate = sparse_result.rate;
    selected = sparse_result.selected;
    fit_report = &sparse_result.estimate.report;
    Matrix all = stack(groups.data);
    reduced_all.resize(all.rows(), top_k);
    for (Index j = 0; j < top_k; ++j) {
      reduced_all.col(j) = all.col(selected[static_cast<size_t>(j)]);
    }
  } else {
    plan = make_plan(dataset.values.cols(), fit.dims_text, fit.permutation_file);
    config = make_config(fit, static_cast<Index>(plan.dims.size()));
    est = estimate_sliced_covariance(stack(groups.data), plan, config);
    w = lda_train(groups.data, est);
    rate = misclassification_rate(groups.data, w);
    fit_report = &est.report;
    reduced_all = stack(groups.data);
  }

  resolved["plan"] = plan_json(plan);
  resolved["config"] = config_json(config);
  resolved["group1"] = groups.label1;
  resolved["group2"] = groups.label2;
  if (sparse) resolved["top_k"] = top_k;
  resolved["seed"] = seed;
  resolved["input"] = load.input;
  resolved["out_dir"] = global.out_dir;
  echo_config(resolved);

  // Weights aligned with the variables the discriminant actually uses.
  {
    std::ofstream out(out_path(global, "weights.csv"), std::ios::binary);
    if (!out) throw DataError("cannot write weights.csv");
    out << "variable,weight\n";
    for (Index j = 0; j < w.size(); ++j) {
      const Index variable = sparse ? selected[static_cast<size_t>(j)] : j;
      out << variable << ',' << format_double(w(j)) << "\n";
    }
    if (!out) throw DataError("write failed for weights.csv");
  }

  // Predictions follow the stacked group order (all group-1 rows, then all
  // group-2 rows), matching the rate computation.
  {
    std::ofstream out(out_path(global, "predictions.csv"), std::ios::binary);
    if (!out) throw DataError("cannot write predictions.csv");
    out << "row,label,score,predicted\n";
    const Index n1 = groups.data.n1();
    for (Index r = 0; r < reduced_all.rows(); ++r) {
      const double score = reduced_all.row(r).dot(w);
      const bool isg1 = score > 0.0;
      const std::string truth = r < n1 ? groups.label1 : groups.label2;
      out << r << ',' << truth << ',' << format_double(score) << ','
          << (isg1 ? groups.label1 : groups.label2) << "\n";
    }
    if (!out) throw DataError("write failed for predictions.csv");
  }

  ordered_json report;
  report["command"] = "lda";
  report["misclassification_rate"] = rate;
  report["n1"] = groups.data.n1();
  report["n2"] = groups.data.n2();
  report["p"] = groups.data.p();
  report["group1"] = groups.label1;
  report["group2"] = groups.label2;
  if (sparse) {
    report["top_k"] = top_k;
    report["selected"] = selected;
  }
  report["plan"] = plan_json(plan);
  report["config"] = config_json(config);
  report["seed"] = seed;
  report["fit"] = report_json(*fit_report);
  write_json(out_path(global, "lda.json"), report);
  std::cout << "misclassification rate " << format_double(rate) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// heatmap

int run_heatmap(const GlobalOptions& global, const LoadOptions& load,
                const FitOptions& fit, bool as_matrix, const std::string& kind,
                const std::string& scale_name, const std::string& output,
                Index cap, std::uint64_t seed) {
  PgmScale scale;
  if (scale_name == "minmax") {
    scale = PgmScale::kMinMax;
  } else if (scale_name == "absolute") {
    scale = PgmScale::kAbsolute;
  } else {
    throw DimensionError("scale: expected minmax or absolute, got '" + scale_name + "'");
  }
  if (kind != "covariance" && kind != "correlation") {
    throw DimensionError("kind: expected covariance or correlation, got '" + kind + "'");
  }

  ordered_json resolved;
  resolved["command"] = "heatmap";
  resolved["as_matrix"] = as_matrix;
  resolved["kind"] = kind;
  resolved["scale"] = scale_name;
  resolved["seed"] = seed;
  resolved["input"] = load.input;
  resolved["out_dir"] = global.out_dir;

  Matrix m;
  if (as_matrix) {
    echo_config(resolved);
    m = load_matrix_csv(load.input);
  } else {
    const Dataset dataset = load_dataset(load);
    const SlicingPlan plan =
        make_plan(dataset.values.cols(), fit.dims_text, fit.permutation_file);
    const FlipFlopConfig config =
        make_config(fit, static_cast<Index>(plan.dims.size()));
    resolved["plan"] = plan_json(plan);
    resolved["config"] = config_json(config);
    echo_config(resolved);
    const CovarianceEstimate est =
        estimate_sliced_covariance(dataset.values, plan, config);
    m = sliced_covariance(est, cap);
  }

  if (kind == "correlation") {
    if (m.rows() != m.cols()) {
      throw DimensionError("heatmap: correlation needs a square matrix");
    }
    Vector scale_diag(m.rows());
    for (Index i = 0; i < m.rows(); ++i) {
      const double d = m(i, i);
      if (d <= 0.0) throw NumericalError("heatmap: nonpositive diagonal entry");
      scale_diag(i) = 1.0 / std::sqrt(d);
    }
    m = scale_diag.asDiagonal() * m * scale_diag.asDiagonal();
  }

  emit_heatmap_pgm(m, out_path(global, output), scale);
  std::cout << "wrote " << output << " (" << m.rows() << "x" << m.cols() << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured covariance estimation for reshaped high-dimensional data"};
  app.set_help_all_flag("--help-all", "Expand all subcommand help");

  GlobalOptions global;
  app.add_option("--out-dir", global.out_dir, "Directory for output files")
      ->envname("SLICECOV_OUT_DIR")
      ->capture_default_str();
  bool fetch = false;
  app.add_flag("--fetch-instructions", fetch,
               "Print provenance and formatting of the external dataset");

  int exit_code = 0;

  // simulate
  {
    auto* cmd = app.add_subcommand("simulate", "Draw array-normal samples to CSV");
    auto preset = std::make_shared<std::string>("identity");
    auto p = std::make_shared<Index>(12);
    auto dims_text = std::make_shared<std::string>();
    auto n = std::make_shared<Index>(20);
    auto seed = std::make_shared<std::uint64_t>(kDefaultSeed);
    cmd->add_option("--preset", *preset, "identity|kron|unstructured");
    cmd->add_option("--p", *p, "Observation dimension");
    cmd->add_option("--dims", *dims_text, "Array dimensions m1xm2x...");
    cmd->add_option("--N", *n, "Number of samples");
    cmd->add_option("--seed", *seed, "RNG seed");
    cmd->callback([&, preset, p, dims_text, n, seed]() {
      exit_code = run_simulate(global, *preset, *p, *dims_text, *n, *seed);
    });
  }

  // estimate / sparse-estimate
  for (const bool sparse : {false, true}) {
    auto* cmd = app.add_subcommand(sparse ? "sparse-estimate" : "estimate",
                                   sparse ? "Fit with L1-penalized components"
                                          : "Fit the sliced covariance model");
    auto load = std::make_shared<LoadOptions>();
    auto fit = std::make_shared<FitOptions>();
    auto seed = std::make_shared<std::uint64_t>(kDefaultSeed);
    add_load_options(cmd, *load, false);
    add_fit_options(cmd, *fit, true);
    cmd->add_option("--seed", *seed, "RNG seed (recorded in outputs)");
    cmd->callback([&, load, fit, seed, sparse]() {
      exit_code = run_estimate(global, *load, *fit, *seed, sparse);
    });
  }

  // eigen
  {
    auto* cmd = app.add_subcommand("eigen", "Eigenvalue table or N-sweep curves");
    auto load = std::make_shared<LoadOptions>();
    auto fit = std::make_shared<FitOptions>();
    auto seed = std::make_shared<std::uint64_t>(kDefaultSeed);
    auto top = std::make_shared<Index>(0);
    auto sweep = std::make_shared<bool>(false);
    auto preset = std::make_shared<std::string>("identity");
    auto p = std::make_shared<Index>(12);
    auto n_list = std::make_shared<std::string>("5,10,20,50");
    auto replications = std::make_shared<Index>(5);
    cmd->add_option("--input", load->input, "Input CSV (table mode)");
    cmd->add_flag("--has-header", load->has_header, "First CSV line is a header");
    add_fit_options(cmd, *fit, true);
    cmd->add_option("--top", *top, "Emit only the k largest eigenvalues");
    cmd->add_flag("--sweep", *sweep, "Simulated N-sweep instead of a table");
    cmd->add_option("--preset", *preset, "Sweep truth: identity|kron|unstructured");
    cmd->add_option("--p", *p, "Sweep observation dimension");
    cmd->add_option("--N-list", *n_list, "Sweep sample sizes, comma separated");
    cmd->add_option("--replications", *replications, "Sweep replications");
    cmd->add_option("--seed", *seed, "RNG seed");
    cmd->callback([&, load, fit, seed, top, sweep, preset, p, n_list, replications]() {
      if (*sweep) {
        exit_code = run_eigen_sweep(global, *preset, *p, *fit, *n_list, *replications,
                                    *seed);
      } else {
        if (load->input.empty()) {
          throw CLI::ValidationError("--input is required without --sweep");
        }
        exit_code = run_eigen_table(global, *load, *fit, *seed, *top);
      }
    });
  }

  // ftest
  {
    auto* cmd = app.add_subcommand("ftest", "Two-sample mean test for p >> n");
    auto load = std::make_shared<LoadOptions>();
    auto fit = std::make_shared<FitOptions>();
    auto seed = std::make_shared<std::uint64_t>(kDefaultSeed);
    auto group1 = std::make_shared<std::string>();
    auto rank = std::make_shared<Index>(0);
    add_load_options(cmd, *load, true);
    add_fit_options(cmd, *fit, true);
    cmd->add_option("--group1", *group1, "Label value treated as group 1");
    cmd->add_option("--rank", *rank, "Assumed rank r of the covariance (default n-1)");
    cmd->add_option("--seed", *seed, "RNG seed (recorded in outputs)");
    cmd->callback([&, load, fit, seed, group1, rank]() {
      exit_code = run_ftest(global, *load, *fit, *group1, *rank, *seed);
    });
  }

  // lda
  {
    auto* cmd = app.add_subcommand("lda", "Fisher discriminant classification");
    auto load = std::make_shared<LoadOptions>();
    auto fit = std::make_shared<FitOptions>();
    auto seed = std::make_shared<std::uint64_t>(kDefaultSeed);
    auto group1 = std::make_shared<std::string>();
    auto top_k = std::make_shared<Index>(0);
    add_load_options(cmd, *load, true);
    add_fit_options(cmd, *fit, true);
    cmd->add_option("--group1", *group1, "Label value treated as group 1");
    cmd->add_option("--top-k", *top_k,
                    "Keep only the k highest-variance variables (sparse pipeline)");
    cmd->add_option("--seed", *seed, "RNG seed (recorded in outputs)");
    cmd->callback([&, load, fit, seed, group1, top_k]() {
      exit_code = run_lda(global, *load, *fit, *group1, *top_k, *seed);
    });
  }

  // heatmap
  {
    auto* cmd = app.add_subcommand("heatmap", "Covariance or correlation PGM image");
    auto load = std::make_shared<LoadOptions>();
    auto fit = std::make_shared<FitOptions>();
    auto seed = std::make_shared<std::uint64_t>(kDefaultSeed);
    auto as_matrix = std::make_shared<bool>(false);
    auto kind = std::make_shared<std::string>("covariance");
    auto scale = std::make_shared<std::string>("minmax");
    auto output = std::make_shared<std::string>("heatmap.pgm");
    auto cap = std::make_shared<Index>(kDefaultDenseCap);
    add_load_options(cmd, *load, false);
    add_fit_options(cmd, *fit, true);
    cmd->add_flag("--as-matrix", *as_matrix, "Input CSV already is the matrix to render");
    cmd->add_option("--kind", *kind, "covariance|correlation");
    cmd->add_option("--scale", *scale, "minmax|absolute");
    cmd->add_option("--output", *output, "Output PGM file name");
    cmd->add_option("--cap", *cap, "Dense materialization cap");
    cmd->add_option("--seed", *seed, "RNG seed (recorded in outputs)");
    cmd->callback([&, load, fit, seed, as_matrix, kind, scale, output, cap]() {
      exit_code = run_heatmap(global, *load, *fit, *as_matrix, *kind, *scale, *output,
                              *cap, *seed);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  }

  if (fetch) {
    std::cout << kFetchInstructions << "\n";
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cout << app.help() << "\n";
    return 1;
  }
  return exit_code;
}
