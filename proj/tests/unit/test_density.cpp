#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hcr/density.hpp"
#include "hcr/error.hpp"
#include "hcr/quadrature.hpp"
#include "hcr/rng.hpp"

using namespace hcr;

namespace {

DensityPolynomial linear(double a1) {
  DensityPolynomial p = DensityPolynomial::uniform(1);
  p.a[1] = a1;
  return p;
}

}  // namespace

TEST_SUITE("density") {

TEST_CASE("raw polynomial values") {
  CHECK(DensityPolynomial::uniform(4)(0.3) == 1.0);
  CHECK(raw_score(linear(0.5), 1.0) == doctest::Approx(1.0 + 0.5 * std::sqrt(3.0)));
  CHECK(raw_score(linear(0.5), 0.0) == doctest::Approx(1.0 - 0.5 * std::sqrt(3.0)));
  CHECK(raw_score(linear(0.5), 0.0) == doctest::Approx(0.1340).epsilon(1e-3));
}

TEST_CASE("softplus constants") {
  const auto s = CalibrationSpec::softplus();
  CHECK(std::abs(s.phi(0.0) - std::log(1.5) / 5) < 1e-15);
  CHECK(std::abs(s.phi(1.0) - std::log(1 + std::exp(5.0) / 2) / 5) < 1e-15);
  CHECK(s.phi(1.0) == doctest::Approx(0.864048).epsilon(1e-6));
  CHECK(s.phi(1000.0) == doctest::Approx(1000.0 - std::log(2.0) / 5));
  CHECK(s.phi(-1000.0) > 0.0);
  CHECK(std::isfinite(s.phi(-1000.0)));
}

TEST_CASE("vectorized phi matches scalar phi") {
  for (const auto& spec : {CalibrationSpec::softplus(), CalibrationSpec::softplus(3, 1.5), CalibrationSpec::clip(0.05)}) {
    Eigen::ArrayXd r = Eigen::ArrayXd::LinSpaced(101, -4.0, 6.0);
    Eigen::ArrayXd out = r;
    spec.apply(out);
    for (Eigen::Index i = 0; i < r.size(); ++i) CHECK(out[i] == doctest::Approx(spec.phi(r[i])).epsilon(1e-14));
  }
}

TEST_CASE("calibration spec text") {
  CHECK(CalibrationSpec::parse("softplus") == CalibrationSpec::softplus());
  CHECK(CalibrationSpec::parse("softplus:4,3") == CalibrationSpec::softplus(4, 3));
  CHECK(CalibrationSpec::parse("clip:0.02") == CalibrationSpec::clip(0.02));
  CHECK(CalibrationSpec::parse("clip").floor == 0.01);
  for (const auto& s : {CalibrationSpec::softplus(2.5, 7), CalibrationSpec::clip(0.125)})
    CHECK(CalibrationSpec::parse(s.to_string()) == s);
  CHECK_THROWS_AS(CalibrationSpec::parse("cubic"), InvalidArgument);
  CHECK_THROWS_AS(CalibrationSpec::parse("softplus:1"), InvalidArgument);
  CHECK_THROWS_AS(CalibrationSpec::parse("clip:-1"), InvalidArgument);
  CHECK_THROWS_AS(CalibrationSpec::parse("clip:x"), InvalidArgument);
}

TEST_CASE("uniform polynomial calibrates to one") {
  const CalibratedDensity d(DensityPolynomial::uniform(3), CalibrationSpec::softplus());
  CHECK(d.normalizer() == doctest::Approx(std::log(1 + std::exp(5.0) / 2) / 5).epsilon(1e-14));
  for (double x : {0.0, 0.2, 0.5, 1.0}) CHECK(d(x) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("clip leaves a nonnegative polynomial alone") {
  const auto p = linear(0.4);
  const CalibratedDensity d(p, CalibrationSpec::clip(0.01));
  for (double x : {0.0, 0.3, 0.7, 1.0}) CHECK(std::abs(d(x) - p(x)) < 1e-6);
}

TEST_CASE("random polynomials calibrate to proper densities") {
  Rng rng(31);
  const auto& q = gauss_legendre_64();
  const GaussLegendre reference(24);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + static_cast<int>(rng.below(9));
    DensityPolynomial p = DensityPolynomial::uniform(m, trial % 2 ? BasisKind::cosine : BasisKind::legendre);
    for (int j = 1; j <= m; ++j) p.a[j] = 6.0 * rng.uniform() - 3.0;
    CHECK(std::abs(q.integrate([&](double x) { return p(x); }) - 1.0) < 1e-9);
    const CalibratedDensity d(p, trial % 3 ? CalibrationSpec::softplus() : CalibrationSpec::clip(0.01));
    CHECK(std::abs(reference.integrate_adaptive([&](double x) { return d(x); }) - 1.0) < 1e-9);
    for (int i = 0; i <= 50; ++i) CHECK(d(i / 50.0) > 0.0);
  }
}

TEST_CASE("log-likelihood in bits") {
  const CalibratedDensity null(DensityPolynomial::uniform(2), CalibrationSpec::softplus());
  CHECK(std::log2(null(0.42)) == doctest::Approx(0.0).epsilon(1e-14));
  // clip of 1 + f_1 on [0, 1] never binds above 1/2, where the density is 1 + sqrt(3)(2x - 1)
  const double x = (1.0 / std::sqrt(3.0) + 1.0) / 2.0;
  const CalibratedDensity d(linear(1.0), CalibrationSpec::clip(1e-9));
  CHECK(d(x) * d.normalizer() == doctest::Approx(2.0));
}

TEST_CASE("flagging") {
  const std::vector<double> scores{3, 1, 4, 2};
  const auto quarter = flag_threshold(scores, 0.25);
  CHECK(quarter.count == 1);
  CHECK(quarter.flagged == std::vector<bool>{false, true, false, false});
  CHECK(quarter.threshold == 1.0);
  CHECK(flag_threshold(scores, 0.0).count == 0);
  CHECK(flag_threshold(scores, 1.0).count == 4);
  CHECK(flag_threshold(std::vector<double>{}, 0.5).count == 0);
  CHECK_THROWS_AS(flag_threshold(scores, 1.5), InvalidArgument);
  CHECK_THROWS_AS(flag_threshold(scores, -0.1), InvalidArgument);
}

TEST_CASE("flag count is exact floor") {
  CHECK(flag_count(100, 0.05) == 5);
  CHECK(flag_count(100, 0.29) == 29);
  CHECK(flag_count(7, 0.5) == 3);
  CHECK(flag_count(1000, 0.001) == 1);
  for (std::size_t n = 1; n <= 300; ++n)
    for (int pct = 0; pct <= 100; ++pct) CHECK(flag_count(n, pct / 100.0) == n * static_cast<std::size_t>(pct) / 100);
}

TEST_CASE("ties flag the earlier record") {
  const std::vector<double> scores{2, 1, 1, 1, 0};
  const auto r = flag_threshold(scores, 0.4);
  CHECK(r.flagged == std::vector<bool>{false, true, false, false, true});
}

TEST_CASE("marginal density on the original scale") {
  const int n = 400;
  Eigen::VectorXd y(n), y2(n);
  for (int i = 0; i < n; ++i) {
    y[i] = (i + 0.5) / n;
    y2[i] = 2 * y[i];
  }
  const auto col = NormalizedColumn::normalize(y);
  const auto col2 = NormalizedColumn::normalize(y2);
  for (std::size_t k : {0u, 50u, 200u, 399u}) {
    CHECK(marginal_density(col, k) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(marginal_density(col2, k) == doctest::Approx(0.5).epsilon(1e-9));
  }
  const CalibratedDensity uniform(DensityPolynomial::uniform(2), CalibrationSpec::softplus());
  const auto curve = original_scale_density(uniform, col2, 10);
  REQUIRE(curve.size() == 10);
  for (const auto& pt : curve) CHECK(pt.density == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(curve[0].y == col2.inverse_quantile(0.05));
}

TEST_CASE("marginal density with ties stays finite") {
  Eigen::VectorXd y(6);
  y << 1, 1, 1, 1, 1, 2;
  const auto col = NormalizedColumn::normalize(y);
  for (std::size_t k = 0; k < 6; ++k) CHECK(std::isfinite(marginal_density(col, k)));
  Eigen::VectorXd flat = Eigen::VectorXd::Constant(3, 4.0);
  CHECK_THROWS_AS(marginal_density(NormalizedColumn::normalize(flat), 0), InvalidArgument);
}

TEST_CASE("moments on the lattice") {
  Rng rng(41);
  Eigen::VectorXd y(500);
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = std::exp(3.0 * rng.uniform());
  const auto col = NormalizedColumn::normalize(y);
  const MomentLattice lattice(col, 4, BasisKind::legendre);
  const auto null = lattice.moments(DensityPolynomial::uniform(4), CalibrationSpec::softplus());
  const double mean = y.mean();
  const double var = (y.array() - mean).square().mean();
  CHECK(null.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(null.variance == doctest::Approx(var).epsilon(1e-10));

  // brute-force oracle for a steep linear density
  DensityPolynomial steep = DensityPolynomial::uniform(1);
  steep.a[1] = 50.0;
  const auto clip = CalibrationSpec::clip(1e-300);
  const auto got = lattice.moments(steep, clip);
  Eigen::VectorXd sorted = col.sorted_y();
  double sw = 0.0, swy = 0.0;
  for (Eigen::Index i = 0; i < sorted.size(); ++i) {
    const double w = clip.phi(steep((i + 0.5) / 500.0));
    sw += w;
    swy += w * sorted[i];
  }
  CHECK(got.mean == doctest::Approx(swy / sw).epsilon(1e-12));

  // growing a1 moves the mean up towards the ramp limit on the upper half
  double previous = -std::numeric_limits<double>::infinity();
  for (double a1 : {0.5, 2.0, 10.0, 1e3, 1e6}) {
    steep.a[1] = a1;
    const double mean = lattice.moments(steep, clip).mean;
    CHECK(mean > previous);
    previous = mean;
  }
  double rw = 0.0, rwy = 0.0;
  for (Eigen::Index i = sorted.size() / 2; i < sorted.size(); ++i) {
    const double w = (i + 0.5) / 500.0 - 0.5;
    rw += w;
    rwy += w * sorted[i];
  }
  CHECK(previous == doctest::Approx(rwy / rw).epsilon(1e-5));
  CHECK(previous < y.maxCoeff());
  CHECK_THROWS_AS(lattice.moments(DensityPolynomial::uniform(6), CalibrationSpec::softplus()), InvalidArgument);
}

}
