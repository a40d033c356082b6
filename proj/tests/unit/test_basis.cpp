#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hcr/basis.hpp"
#include "hcr/error.hpp"
#include "hcr/quadrature.hpp"

using hcr::BasisKind;
using hcr::eval_basis;

TEST_SUITE("basis") {

TEST_CASE("legendre values at reference points") {
  CHECK(eval_basis(BasisKind::legendre, 1, 1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(std::abs(eval_basis(BasisKind::legendre, 1, 0.5)) < 1e-15);
  CHECK(eval_basis(BasisKind::legendre, 2, 0.5) == doctest::Approx(-std::sqrt(5.0) / 2).epsilon(1e-15));
  CHECK(eval_basis(BasisKind::legendre, 0, 0.3) == 1.0);
}

TEST_CASE("cosine values at reference points") {
  CHECK(std::abs(eval_basis(BasisKind::cosine, 2, 0.25)) < 1e-15);
  CHECK(eval_basis(BasisKind::cosine, 1, 0.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(eval_basis(BasisKind::cosine, 0, 0.7) == 1.0);
}

TEST_CASE("recurrence matches closed forms") {
  for (int i = 0; i <= 200; ++i) {
    const double x = i / 200.0;
    const auto f = hcr::basis_values(BasisKind::legendre, 4, x);
    CHECK(std::abs(f[1] - std::sqrt(3.0) * (2 * x - 1)) < 1e-13);
    CHECK(std::abs(f[2] - std::sqrt(5.0) * (6 * x * x - 6 * x + 1)) < 1e-13);
    CHECK(std::abs(f[3] - std::sqrt(7.0) * (20 * x * x * x - 30 * x * x + 12 * x - 1)) < 1e-13);
    CHECK(std::abs(f[4] - 3.0 * (70 * std::pow(x, 4) - 140 * x * x * x + 90 * x * x - 20 * x + 1)) < 1e-12);
  }
}

TEST_CASE("basis_values agrees with eval_basis") {
  for (auto kind : {BasisKind::legendre, BasisKind::cosine}) {
    const auto f = hcr::basis_values(kind, 12, 0.37);
    for (int j = 0; j <= 12; ++j) CHECK(f[j] == eval_basis(kind, j, 0.37));
  }
}

TEST_CASE("orthonormal under quadrature") {
  const auto& q = hcr::gauss_legendre_64();
  for (auto kind : {BasisKind::legendre, BasisKind::cosine})
    for (int i = 0; i <= 12; ++i)
      for (int j = 0; j <= 12; ++j) {
        const double v = q.integrate([&](double x) { return eval_basis(kind, i, x) * eval_basis(kind, j, x); });
        CHECK(std::abs(v - (i == j ? 1.0 : 0.0)) < 1e-9);
      }
}

TEST_CASE("parity about one half") {
  for (int j = 0; j <= 9; ++j) {
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    CHECK(eval_basis(BasisKind::legendre, j, 0.2) == doctest::Approx(sign * eval_basis(BasisKind::legendre, j, 0.8)));
  }
}

TEST_CASE("scalar type is a template parameter") {
  const long double v = eval_basis<long double>(BasisKind::legendre, 3, 0.25L);
  CHECK(static_cast<double>(v) == doctest::Approx(eval_basis(BasisKind::legendre, 3, 0.25)));
  const float f = eval_basis<float>(BasisKind::cosine, 1, 0.5f);
  CHECK(std::abs(f) < 1e-6f);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(eval_basis(BasisKind::legendre, 1, 1.5), hcr::InvalidArgument);
  CHECK_THROWS_AS(eval_basis(BasisKind::legendre, 1, -0.01), hcr::InvalidArgument);
  CHECK_THROWS_AS(eval_basis(BasisKind::legendre, -1, 0.5), hcr::InvalidArgument);
  CHECK_THROWS_AS(eval_basis(BasisKind::cosine, 2, std::nan("")), hcr::InvalidArgument);
  CHECK_THROWS_AS(hcr::basis_kind_from_string("hermite"), hcr::InvalidArgument);
  CHECK(hcr::basis_kind_from_string(hcr::to_string(BasisKind::cosine)) == BasisKind::cosine);
}

TEST_CASE("basis matrix rows") {
  Eigen::VectorXd xs(3);
  xs << 0.0, 0.5, 1.0;
  const auto m = hcr::basis_matrix(BasisKind::legendre, 2, xs);
  REQUIRE(m.rows() == 3);
  REQUIRE(m.cols() == 3);
  CHECK(m(2, 1) == doctest::Approx(std::sqrt(3.0)));
  CHECK(m(1, 2) == doctest::Approx(-std::sqrt(5.0) / 2));
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const auto& q = hcr::gauss_legendre_64();
  CHECK(q.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 0; k <= 40; ++k)
    CHECK(q.integrate([&](double x) { return std::pow(x, k); }) == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
  const hcr::GaussLegendre small(3);
  CHECK(small.integrate([](double x) { return std::pow(x, 5); }) == doctest::Approx(1.0 / 6).epsilon(1e-14));
}

TEST_CASE("discrete basis, balanced binary") {
  const auto b = hcr::build_discrete_basis({"0", "1", "0", "1"}, 1);
  REQUIRE(b.levels == std::vector<std::string>{"0", "1"});
  CHECK(b.vectors(0, 1) == doctest::Approx(-1.0));
  CHECK(b.vectors(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("discrete basis, skewed binary") {
  const auto b = hcr::build_discrete_basis({"0", "0", "0", "1"}, 1);
  CHECK(b.vectors(0, 1) == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(b.vectors(1, 1) == doctest::Approx(std::sqrt(3.0)));
  CHECK(b.vectors(0, 0) == 1.0);
  CHECK(b.vectors(1, 0) == 1.0);
}

TEST_CASE("discrete basis is orthonormal under level weights") {
  std::vector<std::string> values;
  const char* symbols[] = {"red", "green", "blue", "cyan", "magenta"};
  for (int level = 0; level < 5; ++level)
    for (int copy = 0; copy <= 2 * level; ++copy) values.push_back(symbols[level]);
  const auto b = hcr::build_discrete_basis(values, 4);
  CHECK(b.weights.sum() == doctest::Approx(1.0));
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j)
      CHECK(std::abs(b.dot(b.vectors.col(i), b.vectors.col(j)) - (i == j ? 1.0 : 0.0)) < 1e-12);
  for (int j = 1; j <= 4; ++j) CHECK(b.vectors(4, j) > 0.0);
  CHECK(b.level_index("blue") == 0);
  CHECK(b.level_index("absent") == -1);
}

TEST_CASE("discrete basis rejects degree at alphabet size") {
  CHECK_THROWS_AS(hcr::build_discrete_basis({"a", "b", "a"}, 2), hcr::InvalidArgument);
}

TEST_CASE("level ordering") {
  CHECK(hcr::ordered_levels({"10", "9", "2", "9"}) == std::vector<std::string>{"2", "9", "10"});
  CHECK(hcr::ordered_levels({"b", "10", "a"}) == std::vector<std::string>{"10", "a", "b"});
}

}
