#ifndef HCR_JOINT_HPP
#define HCR_JOINT_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hcr/basis.hpp"

namespace hcr {

/// Per-variable degree indices (j_0 .. j_d) of one product basis function.
/// At most two entries may be nonzero: only pairwise dependencies are modelled.
using MomentIndex = std::vector<int>;

/// Sample mean of prod_k f_{j_k}(x_k) over the rows of xs (n x (d+1),
/// normalized values). This is the least-squares coefficient of that
/// product function in the joint density expansion.
double estimate_coefficient(const Eigen::Ref<const Eigen::MatrixXd>& xs, const MomentIndex& index,
                            BasisKind kind = BasisKind::legendre);

/// Joint density of two normalized variables:
/// rho(a, b) = sum_{i,j <= degree} coeffs(i, j) f_i(a) f_j(b), coeffs(0, 0) = 1.
struct PairwiseDensity {
  std::string var_a;
  std::string var_b;
  int degree = 9;
  BasisKind kind = BasisKind::legendre;
  Eigen::MatrixXd coeffs;

  double operator()(double a, double b) const;
};

PairwiseDensity fit_pairwise(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                             int degree, BasisKind kind = BasisKind::legendre);

/// Raw polynomial on the resolution x resolution midpoint grid; row r is
/// a = (r + 0.5) / resolution, column c is b = (c + 0.5) / resolution.
/// Values can be negative.
Eigen::MatrixXd density_grid(const PairwiseDensity& density, int resolution);

/// Coefficients over the first variable after substituting b and
/// normalizing so the constant term is 1.
Eigen::VectorXd conditional_by_substitution(const PairwiseDensity& density, double b);

}  // namespace hcr

#endif  // HCR_JOINT_HPP
