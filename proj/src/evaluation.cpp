#include "hcr/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hcr/error.hpp"
#include "hcr/parallel.hpp"
#include "hcr/predict.hpp"
#include "hcr/rng.hpp"

namespace hcr {

void EvalParams::validate() const {
  if (degrees.empty()) throw InvalidArgument("no degrees to evaluate");
  for (int d : degrees)
    if (d < 1) throw InvalidArgument("evaluation degrees must be at least 1");
  if (repeats < 1) throw InvalidArgument("repeat count must be at least 1");
  if (!(split > 0.0 && split < 1.0)) throw InvalidArgument("split fraction must be in (0, 1)");
  calibration.validate();
}

std::vector<std::size_t> split_order(std::size_t n, std::uint64_t seed, int repeat) {
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(repeat)));
  return rng.permutation(n);
}

std::size_t training_size(std::size_t n, double split) {
  const auto k = static_cast<std::size_t>(std::floor(split * static_cast<double>(n)));
  if (k == 0 || k >= n)
    throw InvalidArgument("empty split: " + std::to_string(n) + " rows at fraction " + std::to_string(split));
  return k;
}

namespace {

/// Held-out log-likelihood of one repeat for each requested degree.
std::vector<double> run_repeat(const Dataset& data, const EvalParams& params, const std::vector<int>& degrees, int repeat) {
  const auto order = split_order(data.rows(), params.seed, repeat);
  const std::size_t k = training_size(data.rows(), params.split);
  const Dataset train_set = data.take({order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k)});
  const Dataset test_set = data.take({order.begin() + static_cast<std::ptrdiff_t>(k), order.end()});

  TrainOptions options;
  options.degree = *std::max_element(degrees.begin(), degrees.end());
  options.basis = params.basis;
  options.encoding = params.encoding;
  options.calibration = params.calibration;
  options.ridge = params.ridge;
  const TrainedModel model = train(train_set, options).model;

  const Eigen::MatrixXd coeffs = predict_coefficients(model, test_set);
  const Eigen::VectorXd x0 = normalized_targets(model, test_set);
  std::vector<double> out;
  for (int d : degrees) out.push_back(mean_loglik_bits(coeffs.leftCols(d + 1), x0, params.basis, params.calibration));
  return out;
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

}  // namespace

EvalReport evaluate(const Dataset& data, const EvalParams& params) {
  params.validate();
  training_size(data.rows(), params.split);

  std::vector<std::vector<double>> results(static_cast<std::size_t>(params.repeats));
  parallel_for(results.size(), [&](std::size_t r) { results[r] = run_repeat(data, params, params.degrees, static_cast<int>(r)); });

  EvalReport report;
  report.split = params.split;
  report.repeats = params.repeats;
  report.seed = params.seed;
  for (std::size_t d = 0; d < params.degrees.size(); ++d) {
    DegreeResult row;
    row.degree = params.degrees[d];
    for (const auto& r : results) row.per_repeat.push_back(r[d]);
    row.mean = mean_of(row.per_repeat);
    if (row.per_repeat.size() > 1) {
      double ss = 0.0;
      for (double v : row.per_repeat) ss += (v - row.mean) * (v - row.mean);
      row.sd = std::sqrt(ss / static_cast<double>(row.per_repeat.size() - 1));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

double heldout_loglik(const Dataset& data, const std::vector<std::string>& variables, int degree,
                      const EvalParams& params) {
  params.validate();
  if (degree < 1) throw InvalidArgument("degree must be at least 1");
  const Dataset subset = data.select(variables);
  std::vector<double> results(static_cast<std::size_t>(params.repeats));
  parallel_for(results.size(),
               [&](std::size_t r) { results[r] = run_repeat(subset, params, {degree}, static_cast<int>(r)).front(); });
  return mean_of(results);
}

double relevance(const Dataset& data, const std::string& variable, int degree, const EvalParams& params) {
  return heldout_loglik(data, {variable}, degree, params);
}

namespace {

std::vector<std::string> without(std::vector<std::string> names, const std::string& drop) {
  names.erase(std::remove(names.begin(), names.end(), drop), names.end());
  return names;
}

}  // namespace

double novelty(const Dataset& data, const std::string& variable, int degree, const EvalParams& params) {
  const auto all = data.schema().endogenous_names();
  if (std::find(all.begin(), all.end(), variable) == all.end())
    throw InvalidArgument("unknown endogenous variable: " + variable);
  return heldout_loglik(data, all, degree, params) - heldout_loglik(data, without(all, variable), degree, params);
}

std::vector<GreedyStep> greedy_order(const Dataset& data, int degree, const EvalParams& params) {
  std::vector<std::string> remaining = data.schema().endogenous_names();
  std::vector<std::string> chosen;
  std::vector<GreedyStep> steps;
  while (!remaining.empty()) {
    std::size_t best = 0;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < remaining.size(); ++c) {
      auto candidate = chosen;
      candidate.push_back(remaining[c]);
      const double ll = heldout_loglik(data, candidate, degree, params);
      if (ll > best_ll) {
        best_ll = ll;
        best = c;
      }
    }
    chosen.push_back(remaining[best]);
    steps.push_back({remaining[best], best_ll});
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return steps;
}

ImportanceReport importance(const Dataset& data, int degree, const EvalParams& params, bool with_greedy) {
  ImportanceReport report;
  report.degree = degree;
  const auto all = data.schema().endogenous_names();
  report.baseline = heldout_loglik(data, {}, degree, params);
  report.full = heldout_loglik(data, all, degree, params);
  for (const auto& name : all) {
    VariableImportance item;
    item.variable = name;
    item.relevance = heldout_loglik(data, {name}, degree, params);
    item.novelty = report.full - heldout_loglik(data, without(all, name), degree, params);
    report.variables.push_back(std::move(item));
  }
  if (with_greedy) report.greedy = greedy_order(data, degree, params);
  return report;
}

}  // namespace hcr
