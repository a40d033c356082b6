#ifndef HCR_DENSITY_HPP
#define HCR_DENSITY_HPP

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hcr/basis.hpp"
#include "hcr/edf.hpp"

namespace hcr {

/// rho(x) = sum_j a_j f_j(x) on [0, 1] with a_0 = 1, so it integrates to 1
/// but may dip below zero.
struct DensityPolynomial {
  Eigen::VectorXd a;
  BasisKind kind = BasisKind::legendre;

  static DensityPolynomial uniform(int degree, BasisKind kind = BasisKind::legendre);

  int degree() const { return static_cast<int>(a.size()) - 1; }
  double operator()(double x) const;
};

/// Raw credibility score: the polynomial at the record's normalized target.
inline double raw_score(const DensityPolynomial& poly, double x0) { return poly(x0); }

/// Positive map phi applied to raw densities before renormalizing.
///   softplus: phi(r) = ln(1 + exp(k r) / c) / k   (defaults k = 5, c = 2)
///   clip:     phi(r) = max(r, eps)
struct CalibrationSpec {
  enum class Variant { softplus, clip };
  Variant variant = Variant::softplus;
  double steepness = 5.0;
  double divisor = 2.0;
  double floor = 0.01;

  static CalibrationSpec softplus(double k = 5.0, double c = 2.0);
  static CalibrationSpec clip(double eps);

  /// "softplus", "softplus:K,C", "clip", "clip:EPS".
  static CalibrationSpec parse(std::string_view text);
  std::string to_string() const;

  void validate() const;
  double phi(double rho) const;
  /// In-place phi over an array of raw densities.
  void apply(Eigen::Ref<Eigen::ArrayXd> rho) const;

  bool operator==(const CalibrationSpec&) const = default;
};

/// x -> phi(rho(x)) / int_0^1 phi(rho(t)) dt. The normalizer uses the 64-node
/// Gauss-Legendre rule, bisected adaptively where phi bends sharply.
class CalibratedDensity {
 public:
  CalibratedDensity(DensityPolynomial poly, CalibrationSpec spec);

  double operator()(double x) const;
  double normalizer() const { return normalizer_; }
  const DensityPolynomial& polynomial() const { return poly_; }
  const CalibrationSpec& spec() const { return spec_; }

 private:
  DensityPolynomial poly_;
  CalibrationSpec spec_;
  double normalizer_;
};

inline CalibratedDensity calibrate(DensityPolynomial poly, const CalibrationSpec& spec) {
  return CalibratedDensity(std::move(poly), spec);
}

/// Precomputed basis values on the moment lattice (i - 0.5)/n, i = 1..n, so
/// many records can share one evaluation grid.
class MomentLattice {
 public:
  MomentLattice(const NormalizedColumn& target, int degree, BasisKind kind);

  struct Moments {
    double mean = 0.0;
    double variance = 0.0;
  };

  /// Distribution over the sorted training targets with weights
  /// proportional to phi(rho((i - 0.5)/n)).
  Moments moments(const DensityPolynomial& poly, const CalibrationSpec& spec) const;

 private:
  Eigen::VectorXd sorted_y_;
  Eigen::MatrixXd basis_;  // n x (degree + 1)
};

/// One point of a density curve translated back to the original scale.
struct CurvePoint {
  double x = 0.0;
  double raw = 0.0;
  double calibrated = 0.0;
  double y = 0.0;
  double marginal = 0.0;
  double density = 0.0;  // calibrated * marginal
};

/// Local EDF slope around sorted position k: (hi - lo)/n / (y_hi - y_lo) over
/// a window of about sqrt(n)/2 positions per side, widened past ties. Throws on
/// a constant column.
double marginal_density(const NormalizedColumn& target, std::size_t k);
std::size_t marginal_half_width(std::size_t n);

/// Curve on the grid x = (i - 0.5)/resolution: y = inverse_quantile(x) and
/// density = calibrated(x) * marginal density at y.
std::vector<CurvePoint> original_scale_density(const CalibratedDensity& density, const NormalizedColumn& target,
                                               int resolution);

struct FlagResult {
  /// Score of the last flagged record, -inf when nothing is flagged.
  double threshold = -std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  std::vector<bool> flagged;
};

/// Flags exactly floor(fraction * n) records with the lowest scores; ties go
/// to the earlier record.
FlagResult flag_threshold(const std::vector<double>& scores, double fraction);

/// floor(fraction * n), tolerant of representation error in fraction.
std::size_t flag_count(std::size_t n, double fraction);

}  // namespace hcr

#endif  // HCR_DENSITY_HPP
