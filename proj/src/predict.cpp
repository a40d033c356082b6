#include "hcr/predict.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "hcr/error.hpp"
#include "hcr/parallel.hpp"
#include "hcr/quadrature.hpp"

namespace hcr {

namespace {

DensityPolynomial polynomial_from_row(const TrainedModel& model, const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  return DensityPolynomial{row.transpose(), model.basis()};
}

void check_schema(const TrainedModel& model, const Dataset& data) {
  if (!(data.schema() == model.schema())) throw InvalidArgument("dataset schema does not match the model");
}

}  // namespace

DensityPolynomial predict_density(const TrainedModel& model, const Record& record) {
  const Record normalized = normalize_record(record, model.schema(), model.normalizers);
  const Eigen::VectorXd v = model.layout.featurize(normalized);
  DensityPolynomial poly{Eigen::VectorXd(model.degree + 1), model.basis()};
  poly.a[0] = 1.0;
  poly.a.tail(model.degree) = model.beta.transpose() * v;
  return poly;
}

Eigen::MatrixXd predict_coefficients(const TrainedModel& model, const Dataset& data) {
  check_schema(model, data);
  const Eigen::MatrixXd design = build_design_matrix(model.layout, data, model.normalizers);
  Eigen::MatrixXd out(design.rows(), model.degree + 1);
  out.col(0).setOnes();
  out.rightCols(model.degree) = design * model.beta;
  return out;
}

Eigen::VectorXd normalized_targets(const TrainedModel& model, const Dataset& data) {
  check_schema(model, data);
  const auto& y = data.target();
  Eigen::VectorXd x(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) x[i] = model.target().transform(y[i]);
  return x;
}

double loglik_bits(const TrainedModel& model, const Record& record) {
  const auto t = model.schema().target_index();
  const double* y = t < record.size() ? std::get_if<double>(&record[t]) : nullptr;
  if (!y) throw InvalidArgument("record has no numeric target value");
  const CalibratedDensity density(predict_density(model, record), model.calibration);
  return std::log2(density(model.target().transform(*y)));
}

double mean_loglik_bits(const TrainedModel& model, const Dataset& data) {
  if (data.rows() == 0) throw InvalidArgument("cannot evaluate on an empty dataset");
  return mean_loglik_bits(predict_coefficients(model, data), normalized_targets(model, data), model.basis(),
                          model.calibration);
}

double mean_loglik_bits(const Eigen::Ref<const Eigen::MatrixXd>& coefficients, const Eigen::Ref<const Eigen::VectorXd>& x0,
                        BasisKind kind, const CalibrationSpec& calibration) {
  if (coefficients.rows() == 0) throw InvalidArgument("cannot evaluate on an empty dataset");
  if (coefficients.rows() != x0.size()) throw InvalidArgument("coefficient rows do not match targets");
  double bits = 0.0;
  for (Eigen::Index i = 0; i < coefficients.rows(); ++i) {
    const CalibratedDensity density(DensityPolynomial{coefficients.row(i).transpose(), kind}, calibration);
    bits += std::log2(density(x0[i]));
  }
  return bits / static_cast<double>(coefficients.rows());
}

MomentLattice::Moments predict_moments(const TrainedModel& model, const Record& record) {
  const MomentLattice lattice(model.target(), model.degree, model.basis());
  return lattice.moments(predict_density(model, record), model.calibration);
}

std::vector<ScoreRow> score_dataset(const TrainedModel& model, const Dataset& data, const ScoreOptions& options) {
  const Eigen::MatrixXd coeffs = predict_coefficients(model, data);
  const Eigen::VectorXd x0 = normalized_targets(model, data);
  const auto n = static_cast<std::size_t>(coeffs.rows());
  std::vector<ScoreRow> rows(n);
  std::optional<MomentLattice> lattice;
  if (options.moments) lattice.emplace(model.target(), model.degree, model.basis());

  constexpr std::size_t kBlock = 256;
  parallel_for((n + kBlock - 1) / kBlock, [&](std::size_t b) {
    for (std::size_t i = b * kBlock; i < std::min(n, (b + 1) * kBlock); ++i) {
      auto& row = rows[i];
      const auto r = static_cast<Eigen::Index>(i);
      const CalibratedDensity density(polynomial_from_row(model, coeffs.row(r)), model.calibration);
      row.id = i + 1;
      row.raw_score = density.polynomial()(x0[r]);
      row.calibrated = density(x0[r]);
      row.log2_density = std::log2(row.calibrated);
      if (lattice) {
        const auto m = lattice->moments(density.polynomial(), model.calibration);
        row.expected = m.mean;
        row.stddev = std::sqrt(m.variance);
      }
    }
  });

  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) scores[i] = rows[i].raw_score;
  const FlagResult flags = flag_threshold(scores, options.flag_fraction);
  for (std::size_t i = 0; i < n; ++i) rows[i].flagged = flags.flagged[i];
  return rows;
}

}  // namespace hcr
