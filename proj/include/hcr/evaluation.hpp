#ifndef HCR_EVALUATION_HPP
#define HCR_EVALUATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hcr/dataset.hpp"
#include "hcr/regression.hpp"

namespace hcr {

/// Repeated random-split protocol: train on a seeded fraction of the rows,
/// score the mean log2 calibrated density of the rest.
struct EvalParams {
  std::vector<int> degrees = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  int repeats = 10;
  double split = 0.75;
  std::uint64_t seed = 0;
  BasisKind basis = BasisKind::legendre;
  CategoricalEncoding encoding = CategoricalEncoding::onehot;
  CalibrationSpec calibration;
  double ridge = 0.0;

  void validate() const;
};

struct DegreeResult {
  int degree = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation over repeats (0 for one repeat)
  std::vector<double> per_repeat;
};

struct EvalReport {
  std::vector<DegreeResult> rows;
  double split = 0.0;
  int repeats = 0;
  std::uint64_t seed = 0;
};

/// Row order of repeat r: a seeded permutation; the first
/// floor(split * n) rows train, the remainder is held out.
std::vector<std::size_t> split_order(std::size_t n, std::uint64_t seed, int repeat);
std::size_t training_size(std::size_t n, double split);

EvalReport evaluate(const Dataset& data, const EvalParams& params);

/// Mean held-out log-likelihood (bits) at one degree using only the listed
/// endogenous variables. Every call with the same params sees the same splits.
double heldout_loglik(const Dataset& data, const std::vector<std::string>& variables, int degree,
                      const EvalParams& params);

/// Log-likelihood using the target and this one variable.
double relevance(const Dataset& data, const std::string& variable, int degree, const EvalParams& params);

/// Log-likelihood with all variables minus log-likelihood without this one.
double novelty(const Dataset& data, const std::string& variable, int degree, const EvalParams& params);

struct GreedyStep {
  std::string variable;
  double loglik = 0.0;  // using every variable chosen so far
};

/// Forward selection: repeatedly add the variable whose inclusion gives the
/// highest held-out log-likelihood.
std::vector<GreedyStep> greedy_order(const Dataset& data, int degree, const EvalParams& params);

struct VariableImportance {
  std::string variable;
  double relevance = 0.0;
  double novelty = 0.0;
};

struct ImportanceReport {
  int degree = 0;
  double baseline = 0.0;  // no endogenous variables
  double full = 0.0;      // all endogenous variables
  std::vector<VariableImportance> variables;
  std::vector<GreedyStep> greedy;
};

ImportanceReport importance(const Dataset& data, int degree, const EvalParams& params, bool with_greedy = true);

}  // namespace hcr

#endif  // HCR_EVALUATION_HPP
