#ifndef HCR_FEATURES_HPP
#define HCR_FEATURES_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hcr/basis.hpp"
#include "hcr/dataset.hpp"
#include "hcr/edf.hpp"

namespace hcr {

/// One cell of a record: a number (continuous, binary) or a symbol (categorical).
using Cell = std::variant<double, std::string>;
/// Cells indexed like the schema's variables; the target cell may be absent.
using Record = std::vector<Cell>;

/// Per-variable normalization state, indexed like the schema. Engaged for
/// continuous variables only.
using Normalizers = std::vector<std::optional<NormalizedColumn>>;

Normalizers fit_normalizers(const Dataset& data);

enum class CategoricalEncoding { onehot, orthonormal };

std::string_view to_string(CategoricalEncoding encoding);
CategoricalEncoding categorical_encoding_from_string(std::string_view name);

enum class FeatureKind { constant, moment, onehot, binary, discrete };

std::string_view to_string(FeatureKind kind);

/// Describes one coordinate of the feature vector.
struct FeatureEntry {
  std::string variable;  // empty for the constant
  FeatureKind kind = FeatureKind::constant;
  int index = 0;          // moment / discrete basis degree
  std::string level;      // onehot level
};

/// Features contributed by one endogenous variable.
struct VariableBlock {
  std::size_t variable = 0;  // schema index
  VariableKind kind = VariableKind::continuous;
  std::size_t offset = 0;
  std::size_t width = 0;
  int degree = 0;                       // continuous
  std::vector<std::string> levels;      // onehot, first-appearance order
  std::optional<DiscreteBasis> basis;   // orthonormal categorical encoding
};

/// Layout of v(y_1..y_d): entry 0 is the constant 1, then per variable in
/// schema order f_1..f_D (continuous), one indicator per training level
/// (categorical) or the raw 0/1 value (binary).
class FeatureLayout {
 public:
  FeatureLayout(DatasetSchema schema, BasisKind kind, CategoricalEncoding encoding, std::vector<VariableBlock> blocks);

  const DatasetSchema& schema() const { return schema_; }
  BasisKind basis() const { return basis_; }
  CategoricalEncoding encoding() const { return encoding_; }
  const std::vector<VariableBlock>& blocks() const { return blocks_; }
  const std::vector<FeatureEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Writes v into out (size p). Continuous cells must already be normalized;
  /// unseen categorical levels leave their block at zero.
  void featurize(const Record& normalized, Eigen::Ref<Eigen::VectorXd> out) const;
  Eigen::VectorXd featurize(const Record& normalized) const;

  int level_index(std::size_t block, std::string_view level) const;

 private:
  DatasetSchema schema_;
  BasisKind basis_;
  CategoricalEncoding encoding_;
  std::vector<VariableBlock> blocks_;
  std::vector<FeatureEntry> entries_;
  std::vector<std::unordered_map<std::string, int>> lookup_;
};

struct LayoutResult {
  FeatureLayout layout;
  std::vector<std::string> warnings;
};

/// Derives the layout from training data. Single-level categorical variables
/// are kept and reported in warnings.
LayoutResult build_layout(const Dataset& data, BasisKind kind = BasisKind::legendre,
                          CategoricalEncoding encoding = CategoricalEncoding::onehot);

/// Normalizes the endogenous cells of a raw record in place.
Record normalize_record(const Record& raw, const DatasetSchema& schema, const Normalizers& normalizers);

/// Raw cells of row r.
Record record_at(const Dataset& data, std::size_t row);

/// n x p matrix M with row i = v(record i).
Eigen::MatrixXd build_design_matrix(const FeatureLayout& layout, const Dataset& data, const Normalizers& normalizers);

/// Mean |v_k| per column of M.
Eigen::VectorXd mean_abs_features(const Eigen::Ref<const Eigen::MatrixXd>& design);

}  // namespace hcr

#endif  // HCR_FEATURES_HPP
