#include "hcr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hcr/basis.hpp"
#include "hcr/error.hpp"
#include "hcr/rng.hpp"

namespace hcr {

using nlohmann::json;

std::string_view to_string(VariableKind kind) {
  switch (kind) {
    case VariableKind::continuous:
      return "continuous";
    case VariableKind::categorical:
      return "categorical";
    case VariableKind::binary:
      return "binary";
  }
  return "unknown";
}

VariableKind variable_kind_from_string(std::string_view name) {
  if (name == "continuous") return VariableKind::continuous;
  if (name == "categorical") return VariableKind::categorical;
  if (name == "binary") return VariableKind::binary;
  throw ParseError("unknown variable kind: " + std::string(name));
}

// ---------------------------------------------------------------------------
// Schema

DatasetSchema::DatasetSchema(std::vector<VariableSpec> variables) : variables_(std::move(variables)) {
  if (variables_.empty()) throw InvalidArgument("schema has no variables");
  std::set<std::string> names;
  std::size_t targets = 0;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const auto& v = variables_[i];
    if (v.name.empty()) throw InvalidArgument("variable with empty name");
    if (!names.insert(v.name).second) throw InvalidArgument("duplicate variable name: " + v.name);
    if (v.feature_degree < 1 || v.feature_degree > 12)
      throw InvalidArgument("feature degree of " + v.name + " must be in [1, 12]");
    if (v.is_target) {
      ++targets;
      target_ = i;
      if (v.kind != VariableKind::continuous) throw InvalidArgument("target " + v.name + " must be continuous");
    }
  }
  if (targets != 1) throw InvalidArgument("schema needs exactly one target variable, found " + std::to_string(targets));
}

std::optional<std::size_t> DatasetSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].name == name) return i;
  return std::nullopt;
}

DatasetSchema DatasetSchema::restricted_to(const std::vector<std::string>& keep) const {
  for (const auto& name : keep)
    if (!index_of(name)) throw InvalidArgument("unknown variable: " + name);
  std::vector<VariableSpec> out;
  for (const auto& v : variables_)
    if (v.is_target || std::find(keep.begin(), keep.end(), v.name) != keep.end()) out.push_back(v);
  return DatasetSchema(std::move(out));
}

std::vector<std::string> DatasetSchema::endogenous_names() const {
  std::vector<std::string> out;
  for (const auto& v : variables_)
    if (!v.is_target) out.push_back(v.name);
  return out;
}

DatasetSchema parse_schema(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("schema is not valid JSON: ") + e.what());
  }
  if (!doc.contains("variables") || !doc["variables"].is_array()) throw ParseError("schema needs a 'variables' array");
  std::vector<VariableSpec> vars;
  try {
    for (const auto& item : doc["variables"]) {
      VariableSpec spec;
      spec.name = item.at("name").get<std::string>();
      spec.kind = variable_kind_from_string(item.at("kind").get<std::string>());
      spec.feature_degree = item.value("degree", 9);
      spec.is_target = item.value("target", false);
      vars.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad schema entry: ") + e.what());
  }
  if (vars.size() < 2) throw ParseError("schema needs at least 2 variables");
  try {
    return DatasetSchema(std::move(vars));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

DatasetSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open schema " + path.string());
  return parse_schema(in);
}

void write_schema(std::ostream& out, const DatasetSchema& schema) {
  json vars = json::array();
  for (const auto& v : schema.variables()) {
    json item = {{"name", v.name}, {"kind", std::string(to_string(v.kind))}};
    if (v.kind == VariableKind::continuous) item["degree"] = v.feature_degree;
    if (v.is_target) item["target"] = true;
    vars.push_back(item);
  }
  out << json{{"variables", vars}}.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(DatasetSchema schema, std::vector<Column> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {
  if (columns_.size() != schema_.size()) throw InvalidArgument("column count does not match schema");
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const auto& spec = schema_[i];
    const auto& col = columns_[i];
    const std::size_t len = spec.kind == VariableKind::categorical ? col.symbols.size()
                                                                    : static_cast<std::size_t>(col.numeric.size());
    if (i == 0) rows_ = len;
    if (len != rows_) throw InvalidArgument("column " + spec.name + " has length " + std::to_string(len));
    if (spec.kind == VariableKind::binary)
      for (Eigen::Index r = 0; r < col.numeric.size(); ++r)
        if (col.numeric[r] != 0.0 && col.numeric[r] != 1.0)
          throw InvalidArgument("binary column " + spec.name + " holds a value outside {0,1}");
    if (spec.kind == VariableKind::continuous && !col.numeric.allFinite())
      throw InvalidArgument("continuous column " + spec.name + " holds a non-finite value");
  }
}

const Column& Dataset::column(std::string_view name) const {
  const auto idx = schema_.index_of(name);
  if (!idx) throw InvalidArgument("unknown variable: " + std::string(name));
  return columns_[*idx];
}

Dataset Dataset::take(const std::vector<std::size_t>& rows) const {
  std::vector<Column> out(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& src = columns_[c];
    if (schema_[c].kind == VariableKind::categorical) {
      out[c].symbols.reserve(rows.size());
      for (std::size_t r : rows) out[c].symbols.push_back(src.symbols.at(r));
    } else {
      out[c].numeric.resize(static_cast<Eigen::Index>(rows.size()));
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k] >= rows_) throw InvalidArgument("row index out of range");
        out[c].numeric[static_cast<Eigen::Index>(k)] = src.numeric[static_cast<Eigen::Index>(rows[k])];
      }
    }
  }
  return Dataset(schema_, std::move(out));
}

Dataset Dataset::select(const std::vector<std::string>& keep) const {
  DatasetSchema sub = schema_.restricted_to(keep);
  std::vector<Column> out;
  for (const auto& v : sub.variables()) out.push_back(columns_[*schema_.index_of(v.name)]);
  return Dataset(std::move(sub), std::move(out));
}

// ---------------------------------------------------------------------------
// CSV

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (quoted) throw ParseError("unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

namespace {

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::string cell_name(std::size_t row, const std::string& column) {
  return "row " + std::to_string(row) + ", column '" + column + "'";
}

}  // namespace

Dataset parse_csv(std::istream& in, const DatasetSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_csv_line(line);

  std::vector<std::size_t> source(schema.size());
  for (std::size_t v = 0; v < schema.size(); ++v) {
    const auto it = std::find(header.begin(), header.end(), schema[v].name);
    if (it == header.end()) throw ParseError("missing column " + schema[v].name);
    source[v] = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<std::vector<double>> numeric(schema.size());
  std::vector<std::vector<std::string>> symbols(schema.size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw ParseError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(header.size()));
    for (std::size_t v = 0; v < schema.size(); ++v) {
      const auto& spec = schema[v];
      const std::string& cell = fields[source[v]];
      if (cell.empty()) throw ParseError("empty cell at " + cell_name(row, spec.name));
      if (spec.kind == VariableKind::categorical) {
        symbols[v].push_back(cell);
        continue;
      }
      double value;
      if (!parse_double(cell, value) || !std::isfinite(value))
        throw ParseError("non-numeric value '" + cell + "' at " + cell_name(row, spec.name));
      if (spec.kind == VariableKind::binary && value != 0.0 && value != 1.0)
        throw ParseError("binary value '" + cell + "' outside {0,1} at " + cell_name(row, spec.name));
      numeric[v].push_back(value);
    }
  }

  std::vector<Column> columns(schema.size());
  for (std::size_t v = 0; v < schema.size(); ++v) {
    if (schema[v].kind == VariableKind::categorical) {
      columns[v].symbols = std::move(symbols[v]);
    } else {
      columns[v].numeric = Eigen::Map<const Eigen::VectorXd>(numeric[v].data(), static_cast<Eigen::Index>(numeric[v].size()));
    }
  }
  return Dataset(schema, std::move(columns));
}

Dataset parse_csv(const std::filesystem::path& path, const DatasetSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return parse_csv(in, schema);
}

void write_csv(std::ostream& out, const Dataset& data) {
  const auto& schema = data.schema();
  for (std::size_t v = 0; v < schema.size(); ++v) out << (v ? "," : "") << csv_escape(schema[v].name);
  out << '\n';
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t v = 0; v < schema.size(); ++v) {
      if (v) out << ',';
      const auto& col = data.column(v);
      if (schema[v].kind == VariableKind::categorical)
        out << csv_escape(col.symbols[r]);
      else
        out << format_double(col.numeric[static_cast<Eigen::Index>(r)]);
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Synthetic data

namespace {

// int_0^x f_j for the orthonormal shifted Legendre family: with t = 2x - 1,
// int P_j dt = (P_{j+1} - P_{j-1}) / (2j + 1) and the lower limit cancels.
double polynomial_cdf(const Eigen::Ref<const Eigen::VectorXd>& a, double x) {
  const int m = static_cast<int>(a.size()) - 1;
  const double t = 2.0 * x - 1.0;
  std::vector<double> p(static_cast<std::size_t>(m) + 2);
  p[0] = 1.0;
  p[1] = t;
  for (int j = 1; j <= m; ++j) p[j + 1] = ((2 * j + 1) * t * p[j] - j * p[j - 1]) / (j + 1);
  double cdf = a[0] * x;
  for (int j = 1; j <= m; ++j) cdf += a[j] * std::sqrt(2.0 * j + 1.0) * (p[j + 1] - p[j - 1]) / (2.0 * (2 * j + 1));
  return cdf;
}

void check_density(const Eigen::VectorXd& a) {
  constexpr int kGrid = 4096;
  Eigen::VectorXd f(a.size());
  for (int i = 0; i <= kGrid; ++i) {
    const double x = static_cast<double>(i) / kGrid;
    basis_values(BasisKind::legendre, static_cast<int>(a.size()) - 1, x, f);
    if (a.dot(f) < -1e-12)
      throw InvalidArgument("invalid generator config: target density is negative at x = " + std::to_string(x));
  }
}

}  // namespace

double sample_polynomial_density(const Eigen::Ref<const Eigen::VectorXd>& coefficients, double u) {
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (polynomial_cdf(coefficients, mid) < u)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Eigen::VectorXd combined_density(const GeneratorConfig& config, const std::vector<std::size_t>& level_of_driver) {
  std::size_t degree = 0;
  for (const auto& d : config.drivers)
    for (const auto& l : d.levels) degree = std::max(degree, l.density.size());
  Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(degree) + 1);
  a[0] = 1.0;
  for (std::size_t d = 0; d < config.drivers.size(); ++d) {
    const auto& coeffs = config.drivers[d].levels.at(level_of_driver.at(d)).density;
    for (std::size_t j = 0; j < coeffs.size(); ++j) a[static_cast<Eigen::Index>(j) + 1] += coeffs[j];
  }
  return a;
}

Dataset generate_synthetic(const GeneratorConfig& config, std::uint64_t seed) {
  if (config.rows == 0) throw InvalidArgument("generator needs at least one row");

  std::vector<std::vector<double>> cumulative;
  std::size_t combinations = 1;
  for (const auto& d : config.drivers) {
    if (d.levels.empty()) throw InvalidArgument("driver " + d.name + " has no levels");
    std::vector<double> cum;
    double total = 0.0;
    for (const auto& l : d.levels) {
      if (!(l.probability >= 0.0)) throw InvalidArgument("negative level probability in " + d.name);
      if (l.density.size() > 12) throw InvalidArgument("driver density degree above 12 in " + d.name);
      total += l.probability;
      cum.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("level probabilities of " + d.name + " do not sum to 1");
    cum.back() = 1.0;
    cumulative.push_back(std::move(cum));
    combinations *= d.levels.size();
    if (combinations > 100000) throw InvalidArgument("too many driver level combinations");
  }

  // Validate and cache every combination's density, indexed mixed-radix.
  std::vector<Eigen::VectorXd> densities(combinations);
  std::vector<std::size_t> levels(config.drivers.size(), 0);
  for (std::size_t c = 0; c < combinations; ++c) {
    std::size_t rest = c;
    for (std::size_t d = 0; d < config.drivers.size(); ++d) {
      levels[d] = rest % config.drivers[d].levels.size();
      rest /= config.drivers[d].levels.size();
    }
    densities[c] = combined_density(config, levels);
    check_density(densities[c]);
  }

  std::vector<VariableSpec> specs;
  specs.push_back({config.target_name, VariableKind::continuous, 9, true});
  for (const auto& d : config.drivers) specs.push_back({d.name, VariableKind::categorical, 9, false});
  for (const auto& v : config.noise) {
    if (v.kind == VariableKind::categorical && v.levels < 1) throw InvalidArgument("noise variable " + v.name + " needs levels");
    specs.push_back({v.name, v.kind, v.feature_degree, false});
  }
  DatasetSchema schema(std::move(specs));

  const auto n = static_cast<Eigen::Index>(config.rows);
  std::vector<Column> columns(schema.size());
  columns[0].numeric.resize(n);
  for (std::size_t d = 0; d < config.drivers.size(); ++d) columns[1 + d].symbols.reserve(config.rows);
  for (std::size_t k = 0; k < config.noise.size(); ++k) {
    auto& col = columns[1 + config.drivers.size() + k];
    if (config.noise[k].kind == VariableKind::categorical)
      col.symbols.reserve(config.rows);
    else
      col.numeric.resize(n);
  }

  Rng rng(seed);
  for (Eigen::Index r = 0; r < n; ++r) {
    std::size_t combo = 0, radix = 1;
    for (std::size_t d = 0; d < config.drivers.size(); ++d) {
      const double u = rng.uniform();
      const auto& cum = cumulative[d];
      const auto level = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
      const std::size_t clamped = std::min(level, cum.size() - 1);
      columns[1 + d].symbols.push_back(config.drivers[d].levels[clamped].label);
      combo += clamped * radix;
      radix *= config.drivers[d].levels.size();
    }
    double x = sample_polynomial_density(densities[combo], rng.uniform());
    if (config.target_scale == TargetScale::exponential) x = -std::log1p(-std::min(x, 1.0 - 0x1.0p-53));
    columns[0].numeric[r] = x;

    for (std::size_t k = 0; k < config.noise.size(); ++k) {
      const auto& v = config.noise[k];
      auto& col = columns[1 + config.drivers.size() + k];
      switch (v.kind) {
        case VariableKind::continuous: {
          double y = v.low + (v.high - v.low) * rng.uniform();
          if (v.round) y = std::round(y);
          col.numeric[r] = y;
          break;
        }
        case VariableKind::categorical:
          col.symbols.push_back(std::to_string(1 + rng.below(static_cast<std::uint64_t>(v.levels))));
          break;
        case VariableKind::binary:
          col.numeric[r] = static_cast<double>(rng.below(2));
          break;
      }
    }
  }
  return Dataset(std::move(schema), std::move(columns));
}

GeneratorConfig parse_generator_config(std::istream& in) {
  GeneratorConfig config;
  try {
    const json doc = json::parse(in);
    config.rows = doc.value("rows", std::size_t{1000});
    config.target_name = doc.value("target", std::string("target"));
    const auto scale = doc.value("target_scale", std::string("identity"));
    if (scale == "identity")
      config.target_scale = TargetScale::identity;
    else if (scale == "exponential")
      config.target_scale = TargetScale::exponential;
    else
      throw ParseError("unknown target_scale: " + scale);
    for (const auto& d : doc.value("drivers", json::array())) {
      DriverVariable driver;
      driver.name = d.at("name").get<std::string>();
      for (const auto& l : d.at("levels")) {
        DriverLevel level;
        level.label = l.at("label").get<std::string>();
        level.probability = l.at("probability").get<double>();
        level.density = l.value("density", std::vector<double>{});
        driver.levels.push_back(std::move(level));
      }
      config.drivers.push_back(std::move(driver));
    }
    for (const auto& v : doc.value("noise", json::array())) {
      NoiseVariable noise;
      noise.name = v.at("name").get<std::string>();
      noise.kind = variable_kind_from_string(v.at("kind").get<std::string>());
      noise.levels = v.value("levels", 2);
      noise.low = v.value("low", 0.0);
      noise.high = v.value("high", 1.0);
      noise.round = v.value("round", false);
      noise.feature_degree = v.value("degree", 9);
      config.noise.push_back(std::move(noise));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad generator config: ") + e.what());
  }
  return config;
}

}  // namespace hcr
