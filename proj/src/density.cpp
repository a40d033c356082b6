#include "hcr/density.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "hcr/error.hpp"
#include "hcr/quadrature.hpp"

namespace hcr {

DensityPolynomial DensityPolynomial::uniform(int degree, BasisKind kind) {
  DensityPolynomial poly{Eigen::VectorXd::Zero(degree + 1), kind};
  poly.a[0] = 1.0;
  return poly;
}

double DensityPolynomial::operator()(double x) const {
  detail::check_unit(x);
  // stack buffer for the usual degrees
  Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 32, 1> small;
  if (a.size() <= 32) {
    small.resize(a.size());
    basis_values(kind, degree(), x, small);
    return a.dot(small);
  }
  Eigen::VectorXd f(a.size());
  basis_values(kind, degree(), x, f);
  return a.dot(f);
}

// ---------------------------------------------------------------------------
// Calibration

CalibrationSpec CalibrationSpec::softplus(double k, double c) {
  CalibrationSpec spec;
  spec.variant = Variant::softplus;
  spec.steepness = k;
  spec.divisor = c;
  spec.validate();
  return spec;
}

CalibrationSpec CalibrationSpec::clip(double eps) {
  CalibrationSpec spec;
  spec.variant = Variant::clip;
  spec.floor = eps;
  spec.validate();
  return spec;
}

namespace {

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    double value;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw InvalidArgument("bad number in calibration spec: " + std::string(item));
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

CalibrationSpec CalibrationSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const auto name = text.substr(0, colon);
  const auto args = colon == std::string_view::npos ? std::vector<double>{} : parse_numbers(text.substr(colon + 1));
  if (name == "softplus") {
    if (args.empty()) return softplus();
    if (args.size() != 2) throw InvalidArgument("softplus calibration takes K,C");
    return softplus(args[0], args[1]);
  }
  if (name == "clip") {
    if (args.empty()) return clip(CalibrationSpec{}.floor);
    if (args.size() != 1) throw InvalidArgument("clip calibration takes EPS");
    return clip(args[0]);
  }
  throw InvalidArgument("unknown calibration: " + std::string(text));
}

std::string CalibrationSpec::to_string() const {
  char buf[128];
  if (variant == Variant::softplus) {
    auto end = std::to_chars(buf, buf + 64, steepness).ptr;
    *end++ = ',';
    end = std::to_chars(end, buf + sizeof buf, divisor).ptr;
    return "softplus:" + std::string(buf, end);
  }
  auto end = std::to_chars(buf, buf + sizeof buf, floor).ptr;
  return "clip:" + std::string(buf, end);
}

void CalibrationSpec::validate() const {
  if (variant == Variant::softplus && !(steepness > 0.0 && divisor > 0.0 && std::isfinite(steepness) && std::isfinite(divisor)))
    throw InvalidArgument("softplus calibration needs k > 0 and c > 0");
  if (variant == Variant::clip && !(floor > 0.0 && std::isfinite(floor)))
    throw InvalidArgument("clip calibration needs eps > 0");
}

double CalibrationSpec::phi(double rho) const {
  if (variant == Variant::clip) return std::max(rho, floor);
  // ln(1 + e^z) / k with z = k rho - ln c, written to avoid overflow
  const double z = steepness * rho - std::log(divisor);
  const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  // exp underflows for z below about -745; keep the density positive
  return std::max(softplus / steepness, std::numeric_limits<double>::min());
}

void CalibrationSpec::apply(Eigen::Ref<Eigen::ArrayXd> rho) const {
  if (variant == Variant::clip) {
    rho = rho.max(floor);
    return;
  }
  const double shift = std::log(divisor);
  Eigen::ArrayXd z = steepness * rho - shift;
  rho = ((z.max(0.0) + (-z.abs()).exp().log1p()) / steepness).max(std::numeric_limits<double>::min());
}

CalibratedDensity::CalibratedDensity(DensityPolynomial poly, CalibrationSpec spec)
    : poly_(std::move(poly)), spec_(spec) {
  spec_.validate();
  normalizer_ = gauss_legendre_64().integrate_adaptive([&](double x) { return spec_.phi(poly_(x)); });
}

double CalibratedDensity::operator()(double x) const { return spec_.phi(poly_(x)) / normalizer_; }

// ---------------------------------------------------------------------------
// Moments on the training lattice

MomentLattice::MomentLattice(const NormalizedColumn& target, int degree, BasisKind kind)
    : sorted_y_(target.sorted_y()) {
  const auto n = sorted_y_.size();
  Eigen::VectorXd grid(n);
  for (Eigen::Index i = 0; i < n; ++i) grid[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  basis_ = basis_matrix(kind, degree, grid);
}

MomentLattice::Moments MomentLattice::moments(const DensityPolynomial& poly, const CalibrationSpec& spec) const {
  if (poly.a.size() > basis_.cols()) throw InvalidArgument("polynomial degree exceeds the moment lattice");
  Eigen::ArrayXd w = basis_.leftCols(poly.a.size()) * poly.a;
  spec.apply(w);
  w /= w.sum();
  Moments out;
  out.mean = (w * sorted_y_.array()).sum();
  out.variance = (w * (sorted_y_.array() - out.mean).square()).sum();
  return out;
}

// ---------------------------------------------------------------------------
// Back-translation to the original scale

std::size_t marginal_half_width(std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(n)) / 2.0));
}

double marginal_density(const NormalizedColumn& target, std::size_t k) {
  std::size_t lo = 0, hi = 0;
  if (!target.spread_window(k, marginal_half_width(target.size()), lo, hi)) throw InvalidArgument("degenerate target column: all values are equal");
  const double n = static_cast<double>(target.size());
  const auto& y = target.sorted_y();
  return (static_cast<double>(hi - lo) / n) /
         (y[static_cast<Eigen::Index>(hi)] - y[static_cast<Eigen::Index>(lo)]);
}

std::vector<CurvePoint> original_scale_density(const CalibratedDensity& density, const NormalizedColumn& target,
                                               int resolution) {
  if (resolution < 1) throw InvalidArgument("curve resolution must be positive");
  const double n = static_cast<double>(target.size());
  std::vector<CurvePoint> curve;
  curve.reserve(static_cast<std::size_t>(resolution));
  for (int i = 1; i <= resolution; ++i) {
    CurvePoint pt;
    pt.x = (i - 0.5) / resolution;
    pt.raw = density.polynomial()(pt.x);
    pt.calibrated = density(pt.x);
    pt.y = target.inverse_quantile(pt.x);
    const auto k = static_cast<std::size_t>(std::clamp(std::round(pt.x * n + 0.5), 1.0, n)) - 1;
    pt.marginal = marginal_density(target, k);
    pt.density = pt.calibrated * pt.marginal;
    curve.push_back(pt);
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Flagging

std::size_t flag_count(std::size_t n, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw InvalidArgument("flag fraction outside [0,1]");
  const double target = fraction * static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::floor(target));
  if (k < n && static_cast<double>(k + 1) - target < 1e-9 * std::max(1.0, target)) ++k;
  return std::min(k, n);
}

FlagResult flag_threshold(const std::vector<double>& scores, double fraction) {
  FlagResult out;
  out.count = flag_count(scores.size(), fraction);
  out.flagged.assign(scores.size(), false);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  for (std::size_t k = 0; k < out.count; ++k) out.flagged[order[k]] = true;
  if (out.count > 0) out.threshold = scores[order[out.count - 1]];
  return out;
}

}  // namespace hcr
