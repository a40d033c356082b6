#include "hcr/basis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace hcr {

std::string_view to_string(BasisKind kind) {
  return kind == BasisKind::legendre ? "legendre" : "cosine";
}

BasisKind basis_kind_from_string(std::string_view name) {
  if (name == "legendre") return BasisKind::legendre;
  if (name == "cosine") return BasisKind::cosine;
  throw InvalidArgument("unknown basis kind: " + std::string(name));
}

Eigen::MatrixXd basis_matrix(BasisKind kind, int m, const Eigen::Ref<const Eigen::VectorXd>& xs) {
  if (m < 0) throw InvalidArgument("negative basis degree");
  Eigen::MatrixXd out(xs.size(), m + 1);
  Eigen::VectorXd row(m + 1);
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    detail::check_unit(xs[i]);
    basis_values(kind, m, xs[i], row);
    out.row(i) = row.transpose();
  }
  return out;
}

int DiscreteBasis::level_index(std::string_view level) const {
  const auto it = std::find(levels.begin(), levels.end(), level);
  return it == levels.end() ? -1 : static_cast<int>(it - levels.begin());
}

namespace {

bool parse_number(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

std::vector<std::string> ordered_levels(const std::vector<std::string>& values) {
  std::vector<std::string> levels(values);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<double> numeric(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (!parse_number(levels[i], numeric[i])) return levels;

  std::vector<std::size_t> order(levels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return numeric[a] < numeric[b]; });
  std::vector<std::string> sorted;
  sorted.reserve(levels.size());
  for (std::size_t i : order) sorted.push_back(levels[i]);
  return sorted;
}

DiscreteBasis build_discrete_basis(const std::vector<std::string>& values, int m) {
  if (values.empty()) throw InvalidArgument("discrete basis of an empty column");
  if (m < 0) throw InvalidArgument("negative basis degree");

  DiscreteBasis basis;
  basis.levels = ordered_levels(values);
  const auto s = static_cast<Eigen::Index>(basis.levels.size());
  if (m >= s)
    throw InvalidArgument("discrete basis degree " + std::to_string(m) + " needs more than " +
                          std::to_string(s) + " levels");

  Eigen::VectorXd counts = Eigen::VectorXd::Zero(s);
  for (const auto& v : values) counts[basis.level_index(v)] += 1.0;
  const double n = static_cast<double>(values.size());
  basis.weights = counts / n;

  // Tie-centred EDF position of each level: (first + last - 1) / (2n).
  Eigen::VectorXd position(s);
  double before = 0.0;
  for (Eigen::Index k = 0; k < s; ++k) {
    position[k] = (2.0 * before + counts[k]) / (2.0 * n);
    before += counts[k];
  }

  basis.vectors.resize(s, m + 1);
  for (Eigen::Index k = 0; k < s; ++k) {
    Eigen::VectorXd seed(m + 1);
    basis_values(BasisKind::legendre, m, position[k], seed);
    basis.vectors.row(k) = seed.transpose();
  }

  // Modified Gram-Schmidt; column 0 is already the unit-norm constant.
  for (int j = 1; j <= m; ++j) {
    auto v = basis.vectors.col(j);
    for (int i = 0; i < j; ++i) v -= basis.dot(basis.vectors.col(i), v) * basis.vectors.col(i);
    const double norm = std::sqrt(basis.dot(v, v));
    if (!(norm > 1e-10)) throw InvalidArgument("discrete basis is numerically degenerate");
    v /= norm;
    if (v[s - 1] < 0.0) v = -v;
  }
  return basis;
}

}  // namespace hcr
