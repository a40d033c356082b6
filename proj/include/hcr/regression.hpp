#ifndef HCR_REGRESSION_HPP
#define HCR_REGRESSION_HPP

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hcr/basis.hpp"
#include "hcr/dataset.hpp"
#include "hcr/density.hpp"
#include "hcr/features.hpp"

namespace hcr {

/// n x m matrix whose column j-1 is b^j = f_j(x0).
Eigen::MatrixXd build_targets(const Eigen::Ref<const Eigen::VectorXd>& x0, int m, BasisKind kind = BasisKind::legendre);

/// Minimum-norm least squares, factorized once and applied per right-hand side.
///
/// M = Q R (Householder), then the pseudoinverse of R from its SVD with
/// singular values at or below sigma_max * max(n, p) * eps treated as zero.
/// R shares M's singular values, so this is pinv(M) b. Each column is solved
/// on its own, so results do not depend on which other columns are present.
class MinNormSolver {
 public:
  /// ridge > 0 solves the augmented system [M; sqrt(ridge) I].
  explicit MinNormSolver(const Eigen::Ref<const Eigen::MatrixXd>& design, double ridge = 0.0);

  Eigen::VectorXd solve(const Eigen::Ref<const Eigen::VectorXd>& b) const;
  Eigen::MatrixXd solve_columns(const Eigen::Ref<const Eigen::MatrixXd>& targets) const;

  Eigen::Index rank() const { return rank_; }
  Eigen::Index cols() const { return cols_; }

 private:
  Eigen::HouseholderQR<Eigen::MatrixXd> qr_;
  Eigen::MatrixXd v_;            // p x r (right singular vectors of R)
  Eigen::MatrixXd ut_;           // r x r (transposed left singular vectors of R)
  Eigen::VectorXd inv_sigma_;    // zero beyond the numerical rank
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  Eigen::Index rank_ = 0;
  double ridge_ = 0.0;
};

Eigen::VectorXd solve_min_norm(const Eigen::Ref<const Eigen::MatrixXd>& design,
                               const Eigen::Ref<const Eigen::VectorXd>& b, double ridge = 0.0);

struct TrainOptions {
  int degree = 4;
  BasisKind basis = BasisKind::legendre;
  CategoricalEncoding encoding = CategoricalEncoding::onehot;
  CalibrationSpec calibration;
  double ridge = 0.0;
};

/// Training-set raw score distribution, used to pick flag thresholds.
struct ScoreSummary {
  std::vector<std::pair<double, double>> quantiles;  // (fraction, raw score)
  double below_zero = 0.0;                           // fraction of raw scores < 0
  double mean_bits = 0.0;                            // mean log2 calibrated density
};

/// Everything needed to score new records.
struct TrainedModel {
  FeatureLayout layout;
  Normalizers normalizers;
  int degree = 0;
  Eigen::MatrixXd beta;  // p x degree; column j-1 holds beta^j
  CalibrationSpec calibration;
  double ridge = 0.0;
  std::size_t training_rows = 0;
  ScoreSummary summary;

  const DatasetSchema& schema() const { return layout.schema(); }
  BasisKind basis() const { return layout.basis(); }
  const NormalizedColumn& target() const { return *normalizers[schema().target_index()]; }

  /// Same model using only the first m coefficient columns. Summary is cleared.
  TrainedModel truncated(int m) const;
};

struct TrainResult {
  TrainedModel model;
  std::vector<std::string> warnings;
};

/// Normalize -> layout -> design matrix -> one least-squares solve per degree.
TrainResult train(const Dataset& data, const TrainOptions& options);

/// Fractions at which ScoreSummary records raw-score quantiles.
const std::vector<double>& summary_fractions();

}  // namespace hcr

#endif  // HCR_REGRESSION_HPP
