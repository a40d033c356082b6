#ifndef HCR_QUADRATURE_HPP
#define HCR_QUADRATURE_HPP

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace hcr {

/// Gauss-Legendre nodes and weights mapped to [0, 1].
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  explicit GaussLegendre(int points);

  template <typename F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }

  /// The rule mapped onto [a, b].
  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double h = b - a;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) sum += weights[i] * f(a + h * nodes[i]);
    return h * sum;
  }

  /// Bisects [0, 1] wherever the two half-panel estimates differ from the
  /// whole-panel one by more than rel_tol times the running total (scaled by
  /// panel width). Smooth integrands stop after the first check.
  template <typename F>
  double integrate_adaptive(F&& f, double rel_tol = 1e-13, int max_depth = 30) const {
    const double whole = integrate(f, 0.0, 1.0);
    const double scale = std::max(std::abs(whole), 1e-300);
    return refine(f, 0.0, 1.0, whole, rel_tol * scale, max_depth);
  }

 private:
  template <typename F>
  double refine(F& f, double a, double b, double whole, double tol, int depth) const {
    const double mid = 0.5 * (a + b);
    const double left = integrate(f, a, mid);
    const double right = integrate(f, mid, b);
    if (depth <= 0 || std::abs(left + right - whole) <= tol * (b - a)) return left + right;
    return refine(f, a, mid, left, tol, depth - 1) + refine(f, mid, b, right, tol, depth - 1);
  }

 public:
};

/// Shared 64-node rule used for every integral over [0, 1].
const GaussLegendre& gauss_legendre_64();

}  // namespace hcr

#endif  // HCR_QUADRATURE_HPP
