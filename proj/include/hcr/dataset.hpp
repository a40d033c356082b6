#ifndef HCR_DATASET_HPP
#define HCR_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace hcr {

enum class VariableKind { continuous, categorical, binary };

std::string_view to_string(VariableKind kind);
VariableKind variable_kind_from_string(std::string_view name);

struct VariableSpec {
  std::string name;
  VariableKind kind = VariableKind::continuous;
  int feature_degree = 9;  // used for continuous variables only
  bool is_target = false;

  bool operator==(const VariableSpec&) const = default;
};

/// Ordered list of variables; exactly one continuous target.
class DatasetSchema {
 public:
  DatasetSchema() = default;
  explicit DatasetSchema(std::vector<VariableSpec> variables);

  const std::vector<VariableSpec>& variables() const { return variables_; }
  std::size_t size() const { return variables_.size(); }
  const VariableSpec& operator[](std::size_t i) const { return variables_[i]; }

  std::size_t target_index() const { return target_; }
  const VariableSpec& target() const { return variables_[target_]; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Schema keeping the target plus the named endogenous variables, in
  /// original order. Unknown names throw.
  DatasetSchema restricted_to(const std::vector<std::string>& keep) const;
  std::vector<std::string> endogenous_names() const;

  bool operator==(const DatasetSchema& other) const { return variables_ == other.variables_; }

 private:
  std::vector<VariableSpec> variables_;
  std::size_t target_ = 0;
};

/// Schema config: {"variables": [{"name", "kind", "degree", "target"}...]}.
DatasetSchema parse_schema(std::istream& in);
DatasetSchema load_schema(const std::filesystem::path& path);
void write_schema(std::ostream& out, const DatasetSchema& schema);

/// One variable's values: numeric for continuous/binary, symbols otherwise.
struct Column {
  Eigen::VectorXd numeric;
  std::vector<std::string> symbols;

  bool operator==(const Column& other) const {
    return symbols == other.symbols && numeric.size() == other.numeric.size() &&
           (numeric.array() == other.numeric.array()).all();
  }
};

/// Immutable column-major table conforming to a schema.
class Dataset {
 public:
  Dataset(DatasetSchema schema, std::vector<Column> columns);

  const DatasetSchema& schema() const { return schema_; }
  std::size_t rows() const { return rows_; }
  const Column& column(std::size_t i) const { return columns_[i]; }
  const Column& column(std::string_view name) const;
  const Eigen::VectorXd& target() const { return columns_[schema_.target_index()].numeric; }

  /// Rows in the given order (indices may repeat).
  Dataset take(const std::vector<std::size_t>& rows) const;
  /// Same rows, schema restricted to target + keep.
  Dataset select(const std::vector<std::string>& keep) const;

  bool operator==(const Dataset& other) const {
    return schema_ == other.schema_ && columns_ == other.columns_;
  }

 private:
  DatasetSchema schema_;
  std::vector<Column> columns_;
  std::size_t rows_ = 0;
};

/// Parses CSV with a header row. Columns not in the schema are ignored.
Dataset parse_csv(std::istream& in, const DatasetSchema& schema);
Dataset parse_csv(const std::filesystem::path& path, const DatasetSchema& schema);
void write_csv(std::ostream& out, const Dataset& data);

/// Splits one CSV line, honouring double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);
/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// ---------------------------------------------------------------------------
// Synthetic data

/// One level of a driver variable. density holds Legendre coefficients
/// a_1..a_k added to the target's normalized conditional density.
struct DriverLevel {
  std::string label;
  double probability = 1.0;
  std::vector<double> density;
};

/// Categorical variable whose level shifts the target density.
struct DriverVariable {
  std::string name;
  std::vector<DriverLevel> levels;
};

/// Variable independent of the target.
struct NoiseVariable {
  std::string name;
  VariableKind kind = VariableKind::continuous;
  int levels = 2;              // categorical: uniform over this many levels
  double low = 0.0, high = 1.0;  // continuous range
  bool round = false;          // continuous: round to integers (creates ties)
  int feature_degree = 9;
};

enum class TargetScale { identity, exponential };

struct GeneratorConfig {
  std::size_t rows = 1000;
  std::string target_name = "target";
  TargetScale target_scale = TargetScale::identity;
  std::vector<DriverVariable> drivers;
  std::vector<NoiseVariable> noise;
};

GeneratorConfig parse_generator_config(std::istream& in);

/// Legendre coefficients (a_0 = 1, a_1..a_k) of the target density for one
/// combination of driver levels; a_j sums the levels' contributions.
Eigen::VectorXd combined_density(const GeneratorConfig& config, const std::vector<std::size_t>& level_of_driver);

/// Draws a dataset. Target is sampled by inverse CDF of the combined
/// density; throws InvalidArgument if any combination is negative on [0,1].
Dataset generate_synthetic(const GeneratorConfig& config, std::uint64_t seed);

/// Inverse CDF at u of sum_j a_j f_j (Legendre, a_0 = 1).
double sample_polynomial_density(const Eigen::Ref<const Eigen::VectorXd>& coefficients, double u);

}  // namespace hcr

#endif  // HCR_DATASET_HPP
