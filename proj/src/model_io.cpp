#include "hcr/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "hcr/error.hpp"
#include "hcr/rng.hpp"

namespace hcr {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kFormatName = "hcr-model";

ordered_json vector_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

ordered_json matrix_json(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

Eigen::VectorXd vector_from(const json& j) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) out[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return out;
}

Eigen::MatrixXd matrix_from(const json& j, Eigen::Index cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols) throw ParseError("ragged matrix in model file");
    for (Eigen::Index c = 0; c < cols; ++c) out(static_cast<Eigen::Index>(r), c) = j[r][static_cast<std::size_t>(c)].get<double>();
  }
  return out;
}

ordered_json calibration_json(const CalibrationSpec& spec) {
  if (spec.variant == CalibrationSpec::Variant::softplus)
    return {{"variant", "softplus"}, {"k", spec.steepness}, {"c", spec.divisor}};
  return {{"variant", "clip"}, {"eps", spec.floor}};
}

CalibrationSpec calibration_from(const json& j) {
  const auto variant = j.at("variant").get<std::string>();
  if (variant == "softplus") return CalibrationSpec::softplus(j.at("k").get<double>(), j.at("c").get<double>());
  if (variant == "clip") return CalibrationSpec::clip(j.at("eps").get<double>());
  throw ParseError("unknown calibration variant in model file: " + variant);
}

}  // namespace

void save_model(std::ostream& out, const TrainedModel& model) {
  const auto& schema = model.schema();

  ordered_json variables = ordered_json::array();
  for (const auto& v : schema.variables())
    variables.push_back(
        {{"name", v.name}, {"kind", std::string(to_string(v.kind))}, {"degree", v.feature_degree}, {"target", v.is_target}});

  ordered_json layout = ordered_json::array();
  for (const auto& block : model.layout.blocks()) {
    ordered_json item = {{"variable", schema[block.variable].name}, {"kind", std::string(to_string(block.kind))}};
    if (block.kind == VariableKind::continuous) item["degree"] = block.degree;
    if (block.kind == VariableKind::categorical) {
      if (block.basis) {
        item["basis"] = {{"levels", block.basis->levels},
                         {"weights", vector_json(block.basis->weights)},
                         {"vectors", matrix_json(block.basis->vectors)}};
      } else {
        item["levels"] = block.levels;
      }
    }
    layout.push_back(std::move(item));
  }

  ordered_json normalizers = ordered_json::object();
  for (std::size_t v = 0; v < schema.size(); ++v)
    if (model.normalizers[v]) normalizers[schema[v].name] = vector_json(model.normalizers[v]->sorted_y());

  ordered_json quantiles = ordered_json::array();
  for (const auto& [q, s] : model.summary.quantiles) quantiles.push_back({q, s});

  ordered_json doc;
  doc["format"] = kFormatName;
  doc["version"] = kModelFormatVersion;
  doc["prng"] = std::string(Rng::kAlgorithm);
  doc["degree"] = model.degree;
  doc["basis"] = std::string(to_string(model.basis()));
  doc["encoding"] = std::string(to_string(model.layout.encoding()));
  doc["calibration"] = calibration_json(model.calibration);
  doc["ridge"] = model.ridge;
  doc["training_rows"] = model.training_rows;
  doc["features"] = model.layout.size();
  doc["variables"] = std::move(variables);
  doc["layout"] = std::move(layout);
  doc["summary"] = {{"quantiles", quantiles},
                    {"below_zero", model.summary.below_zero},
                    {"mean_bits", model.summary.mean_bits}};
  doc["beta"] = matrix_json(model.beta);
  doc["normalizers"] = std::move(normalizers);

  out << "{\n";
  bool first = true;
  for (const auto& [key, value] : doc.items()) {
    if (!first) out << ",\n";
    first = false;
    out << ordered_json(key).dump() << ": " << value.dump();
  }
  out << "\n}\n";
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model " + path.string());
  save_model(out, model);
  if (!out) throw Error("failed writing model " + path.string());
}

TrainedModel load_model(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kFormatName) throw ParseError("not an hcr model file");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) throw ParseError("unsupported model format version " + std::to_string(version));
    if (doc.at("prng").get<std::string>() != Rng::kAlgorithm) throw ParseError("model was written with an unknown PRNG");

    std::vector<VariableSpec> specs;
    for (const auto& v : doc.at("variables"))
      specs.push_back({v.at("name").get<std::string>(), variable_kind_from_string(v.at("kind").get<std::string>()),
                       v.at("degree").get<int>(), v.at("target").get<bool>()});
    DatasetSchema schema(std::move(specs));

    std::vector<VariableBlock> blocks;
    for (const auto& item : doc.at("layout")) {
      VariableBlock block;
      const auto name = item.at("variable").get<std::string>();
      const auto idx = schema.index_of(name);
      if (!idx) throw ParseError("layout refers to unknown variable " + name);
      block.variable = *idx;
      block.kind = variable_kind_from_string(item.at("kind").get<std::string>());
      if (block.kind == VariableKind::continuous) block.degree = item.at("degree").get<int>();
      if (item.contains("levels")) block.levels = item["levels"].get<std::vector<std::string>>();
      if (item.contains("basis")) {
        const auto& b = item["basis"];
        DiscreteBasis basis;
        basis.levels = b.at("levels").get<std::vector<std::string>>();
        basis.weights = vector_from(b.at("weights"));
        const auto cols = b.at("vectors").empty() ? 0 : static_cast<Eigen::Index>(b.at("vectors")[0].size());
        basis.vectors = matrix_from(b.at("vectors"), cols);
        block.basis = std::move(basis);
      }
      blocks.push_back(std::move(block));
    }
    const BasisKind kind = basis_kind_from_string(doc.at("basis").get<std::string>());
    const CategoricalEncoding encoding = categorical_encoding_from_string(doc.at("encoding").get<std::string>());
    FeatureLayout layout(schema, kind, encoding, std::move(blocks));

    Normalizers normalizers(schema.size());
    for (const auto& [name, values] : doc.at("normalizers").items()) {
      const auto idx = schema.index_of(name);
      if (!idx) throw ParseError("normalizer for unknown variable " + name);
      normalizers[*idx] = NormalizedColumn::from_sorted(vector_from(values));
    }
    for (std::size_t v = 0; v < schema.size(); ++v)
      if (schema[v].kind == VariableKind::continuous && !normalizers[v])
        throw ParseError("model file lacks the normalizer for " + schema[v].name);

    const int degree = doc.at("degree").get<int>();
    if (degree < 1) throw ParseError("model degree must be at least 1");
    Eigen::MatrixXd beta = matrix_from(doc.at("beta"), degree);
    if (static_cast<std::size_t>(beta.rows()) != layout.size())
      throw ParseError("coefficient matrix has " + std::to_string(beta.rows()) + " rows, layout has " +
                       std::to_string(layout.size()) + " features");

    ScoreSummary summary;
    const auto& s = doc.at("summary");
    for (const auto& q : s.at("quantiles")) summary.quantiles.emplace_back(q.at(0).get<double>(), q.at(1).get<double>());
    summary.below_zero = s.at("below_zero").get<double>();
    summary.mean_bits = s.at("mean_bits").get<double>();

    return TrainedModel{std::move(layout),
                        std::move(normalizers),
                        degree,
                        std::move(beta),
                        calibration_from(doc.at("calibration")),
                        doc.at("ridge").get<double>(),
                        doc.at("training_rows").get<std::size_t>(),
                        std::move(summary)};
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("inconsistent model file: ") + e.what());
  }
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open model " + path.string());
  return load_model(in);
}

}  // namespace hcr
