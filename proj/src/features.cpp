#include "hcr/features.hpp"

#include "hcr/error.hpp"

namespace hcr {

Normalizers fit_normalizers(const Dataset& data) {
  Normalizers out(data.schema().size());
  for (std::size_t v = 0; v < data.schema().size(); ++v)
    if (data.schema()[v].kind == VariableKind::continuous)
      out[v] = NormalizedColumn::normalize(data.column(v).numeric);
  return out;
}

std::string_view to_string(CategoricalEncoding encoding) {
  return encoding == CategoricalEncoding::onehot ? "onehot" : "orthonormal";
}

CategoricalEncoding categorical_encoding_from_string(std::string_view name) {
  if (name == "onehot") return CategoricalEncoding::onehot;
  if (name == "orthonormal") return CategoricalEncoding::orthonormal;
  throw InvalidArgument("unknown categorical encoding: " + std::string(name));
}

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::constant:
      return "constant";
    case FeatureKind::moment:
      return "moment";
    case FeatureKind::onehot:
      return "onehot";
    case FeatureKind::binary:
      return "binary";
    case FeatureKind::discrete:
      return "discrete";
  }
  return "unknown";
}

FeatureLayout::FeatureLayout(DatasetSchema schema, BasisKind kind, CategoricalEncoding encoding,
                             std::vector<VariableBlock> blocks)
    : schema_(std::move(schema)), basis_(kind), encoding_(encoding), blocks_(std::move(blocks)) {
  entries_.push_back({});
  for (auto& block : blocks_) {
    if (block.variable >= schema_.size() || block.variable == schema_.target_index())
      throw InvalidArgument("feature block refers to an invalid variable");
    const std::string& name = schema_[block.variable].name;
    block.kind = schema_[block.variable].kind;
    block.offset = entries_.size();
    std::unordered_map<std::string, int> lookup;
    switch (block.kind) {
      case VariableKind::continuous:
        for (int j = 1; j <= block.degree; ++j) entries_.push_back({name, FeatureKind::moment, j, {}});
        break;
      case VariableKind::binary:
        entries_.push_back({name, FeatureKind::binary, 0, {}});
        break;
      case VariableKind::categorical:
        if (block.basis) {
          for (std::size_t l = 0; l < block.basis->levels.size(); ++l) lookup.emplace(block.basis->levels[l], static_cast<int>(l));
          for (int j = 1; j <= block.basis->degree(); ++j) entries_.push_back({name, FeatureKind::discrete, j, {}});
        } else {
          for (std::size_t l = 0; l < block.levels.size(); ++l) {
            if (!lookup.emplace(block.levels[l], static_cast<int>(l)).second)
              throw InvalidArgument("duplicate level " + block.levels[l] + " in " + name);
            entries_.push_back({name, FeatureKind::onehot, 0, block.levels[l]});
          }
        }
        break;
    }
    block.width = entries_.size() - block.offset;
    lookup_.push_back(std::move(lookup));
  }
}

int FeatureLayout::level_index(std::size_t block, std::string_view level) const {
  const auto& lookup = lookup_.at(block);
  const auto it = lookup.find(std::string(level));
  return it == lookup.end() ? -1 : it->second;
}

namespace {

double numeric_cell(const Cell& cell, const std::string& name) {
  if (const double* v = std::get_if<double>(&cell)) return *v;
  throw InvalidArgument("expected a number for " + name);
}

const std::string& symbol_cell(const Cell& cell, const std::string& name) {
  if (const auto* v = std::get_if<std::string>(&cell)) return *v;
  throw InvalidArgument("expected a level symbol for " + name);
}

}  // namespace

void FeatureLayout::featurize(const Record& normalized, Eigen::Ref<Eigen::VectorXd> out) const {
  if (out.size() != static_cast<Eigen::Index>(size())) throw InvalidArgument("feature buffer has wrong size");
  if (normalized.size() != schema_.size()) throw InvalidArgument("record does not match schema");
  out.setZero();
  out[0] = 1.0;
  Eigen::VectorXd moments;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& block = blocks_[b];
    const Cell& cell = normalized[block.variable];
    const auto offset = static_cast<Eigen::Index>(block.offset);
    switch (block.kind) {
      case VariableKind::continuous: {
        const double x = numeric_cell(cell, schema_[block.variable].name);
        moments.resize(block.degree + 1);
        detail::check_unit(x);
        basis_values(basis_, block.degree, x, moments);
        out.segment(offset, block.degree) = moments.tail(block.degree);
        break;
      }
      case VariableKind::binary:
        out[offset] = numeric_cell(cell, schema_[block.variable].name);
        break;
      case VariableKind::categorical: {
        const int level = level_index(b, symbol_cell(cell, schema_[block.variable].name));
        if (level < 0) break;
        if (block.basis)
          out.segment(offset, static_cast<Eigen::Index>(block.width)) =
              block.basis->vectors.row(level).tail(static_cast<Eigen::Index>(block.width)).transpose();
        else
          out[offset + level] = 1.0;
        break;
      }
    }
  }
}

Eigen::VectorXd FeatureLayout::featurize(const Record& normalized) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
  featurize(normalized, out);
  return out;
}

LayoutResult build_layout(const Dataset& data, BasisKind kind, CategoricalEncoding encoding) {
  const auto& schema = data.schema();
  std::vector<VariableBlock> blocks;
  std::vector<std::string> warnings;
  for (std::size_t v = 0; v < schema.size(); ++v) {
    const auto& spec = schema[v];
    if (spec.is_target) continue;
    VariableBlock block;
    block.variable = v;
    block.kind = spec.kind;
    if (spec.kind == VariableKind::continuous) block.degree = spec.feature_degree;
    if (spec.kind == VariableKind::categorical) {
      const auto& symbols = data.column(v).symbols;
      std::unordered_map<std::string, int> seen;
      for (const auto& s : symbols)
        if (seen.emplace(s, 0).second) block.levels.push_back(s);
      if (block.levels.size() == 1)
        warnings.push_back("categorical variable " + spec.name + " has a single level; its feature duplicates the constant");
      if (encoding == CategoricalEncoding::orthonormal && !symbols.empty()) {
        block.basis = build_discrete_basis(symbols, static_cast<int>(block.levels.size()) - 1);
        block.levels.clear();
      }
    }
    blocks.push_back(std::move(block));
  }
  return {FeatureLayout(schema, kind, encoding, std::move(blocks)), std::move(warnings)};
}

Record record_at(const Dataset& data, std::size_t row) {
  const auto& schema = data.schema();
  Record out(schema.size());
  for (std::size_t v = 0; v < schema.size(); ++v) {
    if (schema[v].kind == VariableKind::categorical)
      out[v] = data.column(v).symbols[row];
    else
      out[v] = data.column(v).numeric[static_cast<Eigen::Index>(row)];
  }
  return out;
}

Record normalize_record(const Record& raw, const DatasetSchema& schema, const Normalizers& normalizers) {
  if (raw.size() != schema.size()) throw InvalidArgument("record does not match schema");
  Record out = raw;
  for (std::size_t v = 0; v < schema.size(); ++v) {
    if (schema[v].is_target || schema[v].kind != VariableKind::continuous) continue;
    if (!normalizers.at(v)) throw InvalidArgument("no normalizer for " + schema[v].name);
    out[v] = normalizers[v]->transform(numeric_cell(raw[v], schema[v].name));
  }
  return out;
}

Eigen::MatrixXd build_design_matrix(const FeatureLayout& layout, const Dataset& data, const Normalizers& normalizers) {
  if (!(data.schema() == layout.schema())) throw InvalidArgument("dataset schema does not match feature layout");
  const auto n = static_cast<Eigen::Index>(data.rows());
  const auto p = static_cast<Eigen::Index>(layout.size());
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(n, p);
  design.col(0).setOnes();

  // Column-wise fill; equivalent to featurize() row by row.
  Eigen::VectorXd moments;
  for (std::size_t b = 0; b < layout.blocks().size(); ++b) {
    const auto& block = layout.blocks()[b];
    const auto& col = data.column(block.variable);
    const auto offset = static_cast<Eigen::Index>(block.offset);
    switch (block.kind) {
      case VariableKind::continuous: {
        const auto& norm = normalizers.at(block.variable);
        if (!norm) throw InvalidArgument("no normalizer for " + data.schema()[block.variable].name);
        moments.resize(block.degree + 1);
        for (Eigen::Index i = 0; i < n; ++i) {
          basis_values(layout.basis(), block.degree, norm->transform(col.numeric[i]), moments);
          design.row(i).segment(offset, block.degree) = moments.tail(block.degree).transpose();
        }
        break;
      }
      case VariableKind::binary:
        design.col(offset) = col.numeric;
        break;
      case VariableKind::categorical:
        for (Eigen::Index i = 0; i < n; ++i) {
          const int level = layout.level_index(b, col.symbols[static_cast<std::size_t>(i)]);
          if (level < 0) continue;
          if (block.basis)
            design.row(i).segment(offset, static_cast<Eigen::Index>(block.width)) =
                block.basis->vectors.row(level).tail(static_cast<Eigen::Index>(block.width));
          else
            design(i, offset + level) = 1.0;
        }
        break;
    }
  }
  return design;
}

Eigen::VectorXd mean_abs_features(const Eigen::Ref<const Eigen::MatrixXd>& design) {
  if (design.rows() == 0) return Eigen::VectorXd::Zero(design.cols());
  return design.cwiseAbs().colwise().mean().transpose();
}

}  // namespace hcr
