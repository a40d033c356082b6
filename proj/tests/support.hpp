#ifndef HCR_TESTS_SUPPORT_HPP
#define HCR_TESTS_SUPPORT_HPP

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hcr/basis.hpp"
#include "hcr/dataset.hpp"
#include "hcr/quadrature.hpp"
#include "hcr/rng.hpp"

namespace hcr::test {

inline Column numeric_column(std::vector<double> values) {
  Column c;
  c.numeric = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return c;
}

inline Column symbol_column(std::vector<std::string> values) {
  Column c;
  c.symbols = std::move(values);
  return c;
}

inline VariableSpec target_spec(const std::string& name = "y") {
  return VariableSpec{name, VariableKind::continuous, 9, true};
}

/// Two-category generator: density 1 + a1 * f_1 per category, equal weights.
inline GeneratorConfig two_category_config(std::size_t rows, double a1 = 0.5) {
  GeneratorConfig cfg;
  cfg.rows = rows;
  cfg.target_name = "y";
  cfg.drivers.push_back(DriverVariable{"group", {DriverLevel{"a", 0.5, {a1}}, DriverLevel{"b", 0.5, {-a1}}}});
  return cfg;
}

/// Target plus independent noise variables of every kind.
inline GeneratorConfig null_config(std::size_t rows) {
  GeneratorConfig cfg;
  cfg.rows = rows;
  cfg.target_name = "y";
  NoiseVariable cont{"u", VariableKind::continuous};
  cont.feature_degree = 3;
  NoiseVariable cat{"c", VariableKind::categorical};
  cat.levels = 4;
  NoiseVariable bin{"b", VariableKind::binary};
  cfg.noise = {cont, cat, bin};
  return cfg;
}

/// Quadrature oracle for E[log2 rho] under rho(x) = 1 + a1 f_1(x).
inline double expected_bits(double a1) {
  return gauss_legendre_64().integrate([&](double x) {
    const double r = 1.0 + a1 * eval_basis(BasisKind::legendre, 1, x);
    return r * std::log2(r);
  });
}

/// Fresh empty directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("hcr_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

}  // namespace hcr::test

#endif  // HCR_TESTS_SUPPORT_HPP
