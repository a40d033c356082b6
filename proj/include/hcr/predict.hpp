#ifndef HCR_PREDICT_HPP
#define HCR_PREDICT_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hcr/dataset.hpp"
#include "hcr/density.hpp"
#include "hcr/features.hpp"
#include "hcr/regression.hpp"

namespace hcr {

/// a_j = v(record) . beta^j for a raw record (target cell ignored).
DensityPolynomial predict_density(const TrainedModel& model, const Record& record);

/// Row i holds (1, a_1 .. a_m) for record i of data.
Eigen::MatrixXd predict_coefficients(const TrainedModel& model, const Dataset& data);

/// Normalized target of every record, through the model's training EDF.
Eigen::VectorXd normalized_targets(const TrainedModel& model, const Dataset& data);

/// log2 of the calibrated density at the record's actual target.
double loglik_bits(const TrainedModel& model, const Record& record);

/// Mean log2 calibrated density over all records of data.
double mean_loglik_bits(const TrainedModel& model, const Dataset& data);

/// Same from precomputed coefficient rows (1, a_1 .. a_m) and normalized
/// targets. Leading columns of a higher-degree fit give the lower degrees.
double mean_loglik_bits(const Eigen::Ref<const Eigen::MatrixXd>& coefficients, const Eigen::Ref<const Eigen::VectorXd>& x0,
                        BasisKind kind, const CalibrationSpec& calibration);

/// Expected value and variance on the original target scale.
MomentLattice::Moments predict_moments(const TrainedModel& model, const Record& record);

struct ScoreRow {
  std::size_t id = 0;  // 1-based data row
  double raw_score = 0.0;
  double calibrated = 0.0;
  double log2_density = 0.0;
  bool flagged = false;
  double expected = 0.0;
  double stddev = 0.0;
};

struct ScoreOptions {
  double flag_fraction = 0.01;
  bool moments = true;
};

/// Scores every record; exactly floor(fraction * n) are flagged.
std::vector<ScoreRow> score_dataset(const TrainedModel& model, const Dataset& data, const ScoreOptions& options);

}  // namespace hcr

#endif  // HCR_PREDICT_HPP
