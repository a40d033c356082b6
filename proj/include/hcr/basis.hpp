#ifndef HCR_BASIS_HPP
#define HCR_BASIS_HPP

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hcr/error.hpp"

namespace hcr {

/// Orthonormal families on [0, 1]: f_0 = 1 and int_0^1 f_i f_j = delta_ij.
enum class BasisKind { legendre, cosine };

std::string_view to_string(BasisKind kind);
BasisKind basis_kind_from_string(std::string_view name);

namespace detail {

inline void check_unit(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw InvalidArgument("basis argument outside [0,1]: " + std::to_string(x));
}

}  // namespace detail

/// Writes f_0(x) .. f_m(x) into out (size m+1).
///
/// Legendre values come from the shifted three-term recurrence
/// (j+1) P_{j+1} = (2j+1) t P_j - j P_{j-1}, t = 2x-1, scaled by sqrt(2j+1).
template <typename Scalar, typename Derived>
void basis_values(BasisKind kind, int m, const Scalar& x, Eigen::DenseBase<Derived>& out) {
  using std::cos;
  using std::sqrt;
  if (kind == BasisKind::legendre) {
    const Scalar t = Scalar(2) * x - Scalar(1);
    Scalar prev(1);
    Scalar cur = t;
    out(0) = Scalar(1);
    if (m >= 1) out(1) = sqrt(Scalar(3)) * t;
    for (int j = 1; j < m; ++j) {
      const Scalar next = (Scalar(2 * j + 1) * t * cur - Scalar(j) * prev) / Scalar(j + 1);
      prev = cur;
      cur = next;
      out(j + 1) = sqrt(Scalar(2 * j + 3)) * cur;
    }
  } else {
    const Scalar root2 = sqrt(Scalar(2));
    out(0) = Scalar(1);
    for (int j = 1; j <= m; ++j) out(j) = root2 * cos(Scalar(j) * std::numbers::pi_v<Scalar> * x);
  }
}

template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> basis_values(BasisKind kind, int m, const Scalar& x) {
  if (m < 0) throw InvalidArgument("negative basis degree");
  detail::check_unit(static_cast<double>(x));
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(m + 1);
  basis_values(kind, m, x, out);
  return out;
}

/// j-th orthonormal basis function at x.
template <typename Scalar = double>
Scalar eval_basis(BasisKind kind, int j, const Scalar& x) {
  if (j < 0) throw InvalidArgument("negative basis index");
  detail::check_unit(static_cast<double>(x));
  if (kind == BasisKind::cosine) {
    using std::cos;
    using std::sqrt;
    return j == 0 ? Scalar(1) : sqrt(Scalar(2)) * cos(Scalar(j) * std::numbers::pi_v<Scalar> * x);
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(j + 1);
  basis_values(kind, j, x, out);
  return out(j);
}

/// n x (m+1) matrix with row i = (f_0(x_i) .. f_m(x_i)).
Eigen::MatrixXd basis_matrix(BasisKind kind, int m, const Eigen::Ref<const Eigen::VectorXd>& xs);

/// Orthonormal basis for a finite alphabet under [f,g] = sum_x w_x f(x) g(x),
/// with w the level frequencies. vectors.col(j) holds f_j over the levels.
struct DiscreteBasis {
  std::vector<std::string> levels;
  Eigen::VectorXd weights;
  Eigen::MatrixXd vectors;  // s x (m+1)

  int degree() const { return static_cast<int>(vectors.cols()) - 1; }
  int level_index(std::string_view level) const;  // -1 if unknown

  /// Weighted scalar product [f, g].
  double dot(const Eigen::Ref<const Eigen::VectorXd>& f, const Eigen::Ref<const Eigen::VectorXd>& g) const {
    return (weights.array() * f.array() * g.array()).sum();
  }
};

/// Orders level symbols: numerically when every level parses as a number,
/// lexicographically otherwise.
std::vector<std::string> ordered_levels(const std::vector<std::string>& values);

/// Seeds with Legendre polynomials at the tie-centred EDF positions of the
/// levels, then runs modified Gram-Schmidt under the frequency-weighted
/// product. Each f_j (j >= 1) is signed positive at the largest level.
DiscreteBasis build_discrete_basis(const std::vector<std::string>& values, int m);

}  // namespace hcr

#endif  // HCR_BASIS_HPP
