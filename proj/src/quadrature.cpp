#include "hcr/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "hcr/error.hpp"

namespace hcr {

GaussLegendre::GaussLegendre(int points) : nodes(points), weights(points) {
  if (points < 1) throw InvalidArgument("quadrature needs at least one node");
  const int half = (points + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double t = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      derivative = points * (t * p1 - p0) / (t * t - 1.0);
      const double step = p1 / derivative;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - t * t) * derivative * derivative);
    // map [-1, 1] -> [0, 1]
    nodes[i] = 0.5 * (1.0 - t);
    nodes[points - 1 - i] = 0.5 * (1.0 + t);
    weights[i] = weights[points - 1 - i] = 0.5 * w;
  }
}

const GaussLegendre& gauss_legendre_64() {
  static const GaussLegendre rule(64);
  return rule;
}

}  // namespace hcr
