#ifndef HCR_EDF_HPP
#define HCR_EDF_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace hcr {

/// Tie-aware empirical-distribution normalization of one column.
///
/// A value whose equal copies occupy sorted positions first..last (1-based)
/// maps to (first + last - 1) / (2n), so distinct values land on the grid
/// (2k - 1) / (2n) and ties share the centre of their range.
class NormalizedColumn {
 public:
  /// Normalizes values; throws InvalidArgument on empty or non-finite input.
  static NormalizedColumn normalize(const Eigen::Ref<const Eigen::VectorXd>& values);
  /// Rebuilds the lookup state from ascending training values (model loading).
  /// x() is then given in sorted order.
  static NormalizedColumn from_sorted(Eigen::VectorXd sorted_values);

  /// Normalized training values, in input order.
  const Eigen::VectorXd& x() const { return x_; }
  const Eigen::VectorXd& sorted_y() const { return sorted_y_; }
  std::size_t size() const { return static_cast<std::size_t>(sorted_y_.size()); }

  /// Distinct training values with their normalized positions, ascending.
  const std::vector<std::pair<double, double>>& tie_map() const { return tie_map_; }

  /// Normalized position of an arbitrary value: exact for training values,
  /// linear between neighbouring distinct values, clamped to the extreme
  /// positions outside the training range.
  double transform(double y) const;

  /// sorted_y[k] (1-based) with k = clamp(round(q n + 1/2), 1, n).
  double inverse_quantile(double q) const;

  /// Sorted index range [lo, hi] around 0-based position k, at least
  /// half_width positions to each side (clipped at the ends) and widened
  /// until the end values differ. Returns false if the column is constant.
  bool spread_window(std::size_t k, std::size_t half_width, std::size_t& lo, std::size_t& hi) const;

 private:
  Eigen::VectorXd x_;
  Eigen::VectorXd sorted_y_;
  std::vector<std::pair<double, double>> tie_map_;
};

}  // namespace hcr

#endif  // HCR_EDF_HPP
