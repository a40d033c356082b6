#include "hcr/edf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hcr/error.hpp"

namespace hcr {

NormalizedColumn NormalizedColumn::normalize(const Eigen::Ref<const Eigen::VectorXd>& values) {
  const Eigen::Index n = values.size();
  if (n < 1) throw InvalidArgument("cannot normalize an empty column");
  if (!values.allFinite()) throw InvalidArgument("cannot normalize a column with non-finite values");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });

  NormalizedColumn col;
  col.x_.resize(n);
  col.sorted_y_.resize(n);
  const double two_n = 2.0 * static_cast<double>(n);
  Eigen::Index first = 0;
  while (first < n) {
    Eigen::Index last = first;
    while (last + 1 < n && values[order[last + 1]] == values[order[first]]) ++last;
    // 1-based (first + 1) + (last + 1) - 1
    const double x = static_cast<double>(first + last + 1) / two_n;
    for (Eigen::Index k = first; k <= last; ++k) {
      col.x_[order[k]] = x;
      col.sorted_y_[k] = values[order[k]];
    }
    col.tie_map_.emplace_back(values[order[first]], x);
    first = last + 1;
  }
  return col;
}

NormalizedColumn NormalizedColumn::from_sorted(Eigen::VectorXd sorted_values) {
  if (sorted_values.size() < 1) throw InvalidArgument("cannot rebuild an empty column");
  if (!sorted_values.allFinite()) throw InvalidArgument("non-finite training value");
  for (Eigen::Index i = 1; i < sorted_values.size(); ++i)
    if (sorted_values[i] < sorted_values[i - 1]) throw InvalidArgument("training values are not sorted");
  return normalize(sorted_values);
}

double NormalizedColumn::transform(double y) const {
  if (!std::isfinite(y)) throw InvalidArgument("cannot transform a non-finite value");
  const double n = static_cast<double>(sorted_y_.size());
  const auto it = std::lower_bound(tie_map_.begin(), tie_map_.end(), y,
                                   [](const std::pair<double, double>& e, double v) { return e.first < v; });
  if (it != tie_map_.end() && it->first == y) return it->second;
  if (it == tie_map_.begin()) return 1.0 / (2.0 * n);
  if (it == tie_map_.end()) return 1.0 - 1.0 / (2.0 * n);
  const auto& [y_lo, x_lo] = *(it - 1);
  const auto& [y_hi, x_hi] = *it;
  return x_lo + (y - y_lo) / (y_hi - y_lo) * (x_hi - x_lo);
}

double NormalizedColumn::inverse_quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("quantile outside [0,1]: " + std::to_string(q));
  const auto n = static_cast<double>(sorted_y_.size());
  const double k = std::clamp(std::round(q * n + 0.5), 1.0, n);
  return sorted_y_[static_cast<Eigen::Index>(k) - 1];
}

bool NormalizedColumn::spread_window(std::size_t k, std::size_t half_width, std::size_t& lo, std::size_t& hi) const {
  const std::size_t n = size();
  if (n < 2 || sorted_y_[0] == sorted_y_[static_cast<Eigen::Index>(n - 1)]) return false;
  k = std::min(k, n - 1);
  for (std::size_t h = std::max<std::size_t>(half_width, 1);; ++h) {
    lo = k >= h ? k - h : 0;
    hi = std::min(k + h, n - 1);
    if (sorted_y_[static_cast<Eigen::Index>(hi)] > sorted_y_[static_cast<Eigen::Index>(lo)]) return true;
  }
}

}  // namespace hcr
