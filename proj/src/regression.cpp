#include "hcr/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hcr/error.hpp"

namespace hcr {

Eigen::MatrixXd build_targets(const Eigen::Ref<const Eigen::VectorXd>& x0, int m, BasisKind kind) {
  if (m < 1) throw InvalidArgument("model degree must be at least 1");
  return basis_matrix(kind, m, x0).rightCols(m);
}

MinNormSolver::MinNormSolver(const Eigen::Ref<const Eigen::MatrixXd>& design, double ridge)
    : rows_(design.rows()), cols_(design.cols()), ridge_(ridge) {
  if (rows_ < 1 || cols_ < 1) throw InvalidArgument("least squares needs a non-empty design matrix");
  if (!design.allFinite()) throw InvalidArgument("design matrix has non-finite entries");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw InvalidArgument("ridge must be finite and non-negative");

  if (ridge > 0.0) {
    Eigen::MatrixXd augmented(rows_ + cols_, cols_);
    augmented.topRows(rows_) = design;
    augmented.bottomRows(cols_) = std::sqrt(ridge) * Eigen::MatrixXd::Identity(cols_, cols_);
    qr_.compute(augmented);
  } else {
    qr_.compute(design);
  }
  const Eigen::Index total_rows = qr_.rows();
  const Eigen::Index r = std::min(total_rows, cols_);
  const Eigen::MatrixXd upper = qr_.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(upper, Eigen::ComputeThinU | Eigen::ComputeThinV);

  const Eigen::VectorXd& sigma = svd.singularValues();
  const double tol = (sigma.size() ? sigma.maxCoeff() : 0.0) * static_cast<double>(std::max(total_rows, cols_)) *
                     std::numeric_limits<double>::epsilon();
  inv_sigma_ = Eigen::VectorXd::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > tol) {
      inv_sigma_[i] = 1.0 / sigma[i];
      ++rank_;
    }
  }
  v_ = svd.matrixV();
  ut_ = svd.matrixU().transpose();
}

Eigen::VectorXd MinNormSolver::solve(const Eigen::Ref<const Eigen::VectorXd>& b) const {
  if (b.size() != rows_) throw InvalidArgument("target length does not match design rows");
  if (!b.allFinite()) throw InvalidArgument("target vector has non-finite entries");
  Eigen::VectorXd rotated = Eigen::VectorXd::Zero(qr_.rows());
  rotated.head(rows_) = b;
  rotated.applyOnTheLeft(qr_.householderQ().adjoint());
  const Eigen::VectorXd c = ut_ * rotated.head(ut_.cols());
  return v_ * inv_sigma_.cwiseProduct(c);
}

Eigen::MatrixXd MinNormSolver::solve_columns(const Eigen::Ref<const Eigen::MatrixXd>& targets) const {
  Eigen::MatrixXd out(cols_, targets.cols());
  for (Eigen::Index j = 0; j < targets.cols(); ++j) out.col(j) = solve(Eigen::VectorXd(targets.col(j)));
  return out;
}

Eigen::VectorXd solve_min_norm(const Eigen::Ref<const Eigen::MatrixXd>& design, const Eigen::Ref<const Eigen::VectorXd>& b,
                               double ridge) {
  return MinNormSolver(design, ridge).solve(b);
}

const std::vector<double>& summary_fractions() {
  static const std::vector<double> fractions = {0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.25, 0.5};
  return fractions;
}

TrainedModel TrainedModel::truncated(int m) const {
  if (m < 1 || m > degree) throw InvalidArgument("truncation degree must be in [1, " + std::to_string(degree) + "]");
  TrainedModel out{layout, normalizers, m, beta.leftCols(m), calibration, ridge, training_rows, {}};
  return out;
}

TrainResult train(const Dataset& data, const TrainOptions& options) {
  if (options.degree < 1) throw InvalidArgument("model degree must be at least 1");
  options.calibration.validate();
  if (data.rows() < 1) throw InvalidArgument("training data is empty");

  Normalizers normalizers = fit_normalizers(data);
  auto [layout, warnings] = build_layout(data, options.basis, options.encoding);
  const Eigen::MatrixXd design = build_design_matrix(layout, data, normalizers);
  if (static_cast<std::size_t>(design.rows()) < layout.size())
    warnings.push_back("training rows (" + std::to_string(design.rows()) + ") fewer than features (" +
                       std::to_string(layout.size()) + ")");

  const Eigen::VectorXd& x0 = normalizers[data.schema().target_index()]->x();
  const Eigen::MatrixXd targets = build_targets(x0, options.degree, options.basis);
  const MinNormSolver solver(design, options.ridge);

  TrainedModel model{std::move(layout), std::move(normalizers), options.degree, solver.solve_columns(targets),
                     options.calibration, options.ridge, data.rows(), {}};

  // Training-set score summary.
  const Eigen::MatrixXd a = design * model.beta;
  Eigen::VectorXd raw = Eigen::VectorXd::Ones(a.rows()) + a.cwiseProduct(targets).rowwise().sum();
  double bits = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    DensityPolynomial poly{Eigen::VectorXd(options.degree + 1), options.basis};
    poly.a[0] = 1.0;
    poly.a.tail(options.degree) = a.row(i).transpose();
    bits += std::log2(CalibratedDensity(std::move(poly), options.calibration)(x0[i]));
  }
  std::vector<double> sorted(raw.data(), raw.data() + raw.size());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  for (double q : summary_fractions()) {
    const auto k = static_cast<std::size_t>(std::max(0.0, std::ceil(q * n) - 1.0));
    model.summary.quantiles.emplace_back(q, sorted[std::min(k, sorted.size() - 1)]);
  }
  model.summary.below_zero =
      static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), 0.0) - sorted.begin()) / n;
  model.summary.mean_bits = bits / n;
  return {std::move(model), std::move(warnings)};
}

}  // namespace hcr
