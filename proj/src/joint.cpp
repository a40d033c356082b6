#include "hcr/joint.hpp"

#include <cmath>

#include "hcr/error.hpp"

namespace hcr {

double estimate_coefficient(const Eigen::Ref<const Eigen::MatrixXd>& xs, const MomentIndex& index, BasisKind kind) {
  if (static_cast<Eigen::Index>(index.size()) != xs.cols())
    throw InvalidArgument("moment index has " + std::to_string(index.size()) + " entries for " +
                          std::to_string(xs.cols()) + " variables");
  if (xs.rows() < 1) throw InvalidArgument("coefficient estimate needs at least one sample");
  int nonzero = 0;
  for (int j : index) {
    if (j < 0) throw InvalidArgument("negative moment index");
    nonzero += j != 0;
  }
  if (nonzero > 2) throw InvalidArgument("only pairwise moment indices are supported");

  double sum = 0.0;
  for (Eigen::Index i = 0; i < xs.rows(); ++i) {
    double product = 1.0;
    for (std::size_t k = 0; k < index.size(); ++k)
      if (index[k] != 0) product *= eval_basis(kind, index[k], xs(i, static_cast<Eigen::Index>(k)));
    sum += product;
  }
  return sum / static_cast<double>(xs.rows());
}

double PairwiseDensity::operator()(double a, double b) const {
  const Eigen::VectorXd fa = basis_values(kind, degree, a);
  const Eigen::VectorXd fb = basis_values(kind, degree, b);
  return fa.dot(coeffs * fb);
}

PairwiseDensity fit_pairwise(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                             int degree, BasisKind kind) {
  if (a.size() != b.size()) throw InvalidArgument("pairwise columns differ in length");
  if (a.size() < 1) throw InvalidArgument("pairwise fit needs at least one sample");
  if (degree < 0 || degree > 12) throw InvalidArgument("pairwise degree must be in [0, 12]");
  const Eigen::MatrixXd fa = basis_matrix(kind, degree, a);
  const Eigen::MatrixXd fb = basis_matrix(kind, degree, b);
  PairwiseDensity out;
  out.degree = degree;
  out.kind = kind;
  out.coeffs = fa.transpose() * fb / static_cast<double>(a.size());
  out.coeffs(0, 0) = 1.0;
  return out;
}

Eigen::MatrixXd density_grid(const PairwiseDensity& density, int resolution) {
  if (resolution < 1) throw InvalidArgument("grid resolution must be positive");
  Eigen::VectorXd mid(resolution);
  for (int r = 0; r < resolution; ++r) mid[r] = (r + 0.5) / resolution;
  const Eigen::MatrixXd f = basis_matrix(density.kind, density.degree, mid);
  return f * density.coeffs * f.transpose();
}

Eigen::VectorXd conditional_by_substitution(const PairwiseDensity& density, double b) {
  const Eigen::VectorXd fb = basis_values(density.kind, density.degree, b);
  Eigen::VectorXd c = density.coeffs * fb;
  if (std::abs(c[0]) < 1e-9) throw InvalidArgument("degenerate conditional: marginal density vanishes at b");
  c /= c[0];
  c[0] = 1.0;
  return c;
}

}  // namespace hcr
