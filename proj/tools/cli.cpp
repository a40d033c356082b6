#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hcr/dataset.hpp"
#include "hcr/error.hpp"
#include "hcr/evaluation.hpp"
#include "hcr/joint.hpp"
#include "hcr/model_io.hpp"
#include "hcr/predict.hpp"

namespace hcr::cli {

namespace {

struct RunConfig {
  std::string schema;
  std::string input;
  std::string model;
  std::string out;
  std::string config;
  std::string schema_out;
  int degree = 4;
  std::string degrees = "1-9";
  std::string basis = "legendre";
  std::string encoding = "onehot";
  std::string calibration = "softplus";
  double ridge = 0.0;
  double split = 0.75;
  int repeats = 10;
  std::uint64_t seed = 0;
  double flag_fraction = 0.01;
  int pair_degree = 9;
  int resolution = 201;
  std::string records;
  std::string variable;
  bool original_scale = false;
  bool no_moments = false;
  bool no_greedy = false;
};

/// Writes to --out through a temporary file that is renamed only after the
/// whole report succeeded, or to the given stream when --out is empty.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& writer) {
  if (path.empty()) {
    writer(fallback);
    fallback.flush();
    return;
  }
  const std::filesystem::path target(path);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary);
    if (!file) throw Error("cannot write " + tmp.string());
    writer(file);
    file.flush();
    if (!file) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::vector<int> parse_degrees(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dash));
        const int hi = std::stoi(item.substr(dash + 1));
        for (int d = lo; d <= hi; ++d) out.push_back(d);
      }
    } catch (const std::logic_error&) {
      throw InvalidArgument("bad degree list: " + text);
    }
  }
  if (out.empty()) throw InvalidArgument("empty degree list");
  return out;
}

std::vector<std::size_t> parse_records(const std::string& text, std::size_t rows) {
  std::vector<std::size_t> out;
  if (text.empty()) {
    for (std::size_t r = 1; r <= rows; ++r) out.push_back(r);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t id = 0;
    try {
      id = std::stoul(item);
    } catch (const std::logic_error&) {
      throw InvalidArgument("bad record id: " + item);
    }
    if (id < 1 || id > rows) throw InvalidArgument("record id out of range: " + item);
    out.push_back(id);
  }
  return out;
}

EvalParams eval_params(const RunConfig& cfg) {
  EvalParams params;
  params.degrees = parse_degrees(cfg.degrees);
  params.repeats = cfg.repeats;
  params.split = cfg.split;
  params.seed = cfg.seed;
  params.basis = basis_kind_from_string(cfg.basis);
  params.encoding = categorical_encoding_from_string(cfg.encoding);
  params.calibration = CalibrationSpec::parse(cfg.calibration);
  params.ridge = cfg.ridge;
  return params;
}

Dataset load_input(const RunConfig& cfg) {
  if (cfg.schema.empty()) throw InvalidArgument("--schema is required");
  if (cfg.input.empty()) throw InvalidArgument("--input is required");
  return parse_csv(std::filesystem::path(cfg.input), load_schema(cfg.schema));
}

const std::string& require(const std::string& value, const char* flag) {
  if (value.empty()) throw InvalidArgument(std::string(flag) + " is required");
  return value;
}

// --- commands --------------------------------------------------------------

void cmd_generate(const RunConfig& cfg, std::ostream& out) {
  std::ifstream in(require(cfg.config, "--config"));
  if (!in) throw ParseError("cannot open generator config " + cfg.config);
  const Dataset data = generate_synthetic(parse_generator_config(in), cfg.seed);
  emit(cfg.out, out, [&](std::ostream& os) { write_csv(os, data); });
  if (!cfg.schema_out.empty()) {
    std::ofstream schema_file(cfg.schema_out);
    if (!schema_file) throw Error("cannot write " + cfg.schema_out);
    write_schema(schema_file, data.schema());
  }
}

void cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.degree < 1) throw InvalidArgument("--degree must be at least 1");
  const Dataset data = load_input(cfg);
  TrainOptions options;
  options.degree = cfg.degree;
  options.basis = basis_kind_from_string(cfg.basis);
  options.encoding = categorical_encoding_from_string(cfg.encoding);
  options.calibration = CalibrationSpec::parse(cfg.calibration);
  options.ridge = cfg.ridge;
  const auto result = train(data, options);
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  emit(require(cfg.model, "--model"), out, [&](std::ostream& os) { save_model(os, result.model); });
  out << "features p=" << result.model.layout.size() << "\n"
      << "degree m=" << result.model.degree << "\n"
      << "rows n=" << result.model.training_rows << "\n"
      << "training mean log2 density=" << format_double(result.model.summary.mean_bits) << "\n"
      << "training fraction of negative raw scores=" << format_double(result.model.summary.below_zero) << "\n";
}

Dataset load_for_model(const RunConfig& cfg, const TrainedModel& model) {
  return parse_csv(std::filesystem::path(require(cfg.input, "--input")), model.schema());
}

void cmd_score(const RunConfig& cfg, std::ostream& out) {
  const TrainedModel model = load_model(std::filesystem::path(require(cfg.model, "--model")));
  const Dataset data = load_for_model(cfg, model);
  const auto rows = score_dataset(model, data, {cfg.flag_fraction, !cfg.no_moments});
  emit(cfg.out, out, [&](std::ostream& os) {
    os << "id,raw_score,calibrated_density,log2_density,flagged,expected_value,sd\n";
    for (const auto& r : rows) {
      os << r.id << ',' << format_double(r.raw_score) << ',' << format_double(r.calibrated) << ','
         << format_double(r.log2_density) << ',' << (r.flagged ? 1 : 0) << ',';
      if (cfg.no_moments)
        os << ",\n";
      else
        os << format_double(r.expected) << ',' << format_double(r.stddev) << '\n';
    }
  });
}

void cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  const Dataset data = load_input(cfg);
  const EvalReport report = evaluate(data, eval_params(cfg));
  emit(cfg.out, out, [&](std::ostream& os) {
    os << "degree,mean_log2_density,sd,repeats,split,seed\n";
    for (const auto& row : report.rows)
      os << row.degree << ',' << format_double(row.mean) << ',' << format_double(row.sd) << ',' << report.repeats << ','
         << format_double(report.split) << ',' << report.seed << '\n';
  });
}

void cmd_importance(const RunConfig& cfg, std::ostream& out) {
  if (cfg.degree < 1) throw InvalidArgument("--degree must be at least 1");
  const Dataset data = load_input(cfg);
  const ImportanceReport report = importance(data, cfg.degree, eval_params(cfg), !cfg.no_greedy);
  emit(cfg.out, out, [&](std::ostream& os) {
    os << "rank,variable,relevance,novelty,cumulative_log2_density\n";
    const auto find = [&](const std::string& name) {
      return *std::find_if(report.variables.begin(), report.variables.end(),
                           [&](const VariableImportance& v) { return v.variable == name; });
    };
    if (report.greedy.empty()) {
      std::size_t rank = 0;
      for (const auto& v : report.variables)
        os << ++rank << ',' << csv_escape(v.variable) << ',' << format_double(v.relevance) << ','
           << format_double(v.novelty) << ",\n";
    } else {
      std::size_t rank = 0;
      for (const auto& step : report.greedy) {
        const auto& v = find(step.variable);
        os << ++rank << ',' << csv_escape(v.variable) << ',' << format_double(v.relevance) << ','
           << format_double(v.novelty) << ',' << format_double(step.loglik) << '\n';
      }
    }
  });
}

void cmd_density(const RunConfig& cfg, std::ostream& out) {
  if (cfg.resolution < 1) throw InvalidArgument("--resolution must be positive");
  const TrainedModel model = load_model(std::filesystem::path(require(cfg.model, "--model")));
  const Dataset data = load_for_model(cfg, model);
  const auto ids = parse_records(cfg.records, data.rows());
  emit(cfg.out, out, [&](std::ostream& os) {
    os << "record,x,raw,calibrated";
    if (cfg.original_scale) os << ",y,original_density";
    os << '\n';
    for (std::size_t id : ids) {
      const CalibratedDensity density(predict_density(model, record_at(data, id - 1)), model.calibration);
      const auto curve = original_scale_density(density, model.target(), cfg.resolution);
      for (const auto& pt : curve) {
        os << id << ',' << format_double(pt.x) << ',' << format_double(pt.raw) << ',' << format_double(pt.calibrated);
        if (cfg.original_scale) os << ',' << format_double(pt.y) << ',' << format_double(pt.density);
        os << '\n';
      }
    }
  });
}

void cmd_pairs(const RunConfig& cfg, std::ostream& out) {
  if (cfg.resolution < 1) throw InvalidArgument("--resolution must be positive");
  const Dataset data = load_input(cfg);
  const auto& schema = data.schema();
  const Normalizers norms = fit_normalizers(data);
  const auto& target = *norms[schema.target_index()];
  const int degree = cfg.pair_degree;
  std::vector<std::size_t> vars;
  for (std::size_t v = 0; v < schema.size(); ++v) {
    if (schema[v].is_target || schema[v].kind != VariableKind::continuous) continue;
    if (!cfg.variable.empty() && schema[v].name != cfg.variable) continue;
    vars.push_back(v);
  }
  if (vars.empty()) throw InvalidArgument("no continuous endogenous variable to pair with the target");
  emit(cfg.out, out, [&](std::ostream& os) {
    os << "variable_a,variable_b,x_a,x_b,density\n";
    for (std::size_t v : vars) {
      PairwiseDensity pd = fit_pairwise(target.x(), norms[v]->x(), degree, basis_kind_from_string(cfg.basis));
      pd.var_a = schema.target().name;
      pd.var_b = schema[v].name;
      const Eigen::MatrixXd grid = density_grid(pd, cfg.resolution);
      for (int r = 0; r < cfg.resolution; ++r)
        for (int c = 0; c < cfg.resolution; ++c)
          os << csv_escape(pd.var_a) << ',' << csv_escape(pd.var_b) << ',' << format_double((r + 0.5) / cfg.resolution)
             << ',' << format_double((c + 0.5) / cfg.resolution) << ',' << format_double(grid(r, c)) << '\n';
    }
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditional density modelling and credibility scoring with hierarchical correlation reconstruction",
               "hcr"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto add_data = [&](CLI::App* cmd) {
    cmd->add_option("--schema", cfg.schema, "Schema file (JSON)");
    cmd->add_option("--input", cfg.input, "Input CSV");
  };
  const auto add_model_opts = [&](CLI::App* cmd) {
    cmd->add_option("--basis", cfg.basis, "Orthonormal basis: legendre or cosine")->capture_default_str();
    cmd->add_option("--encoding", cfg.encoding, "Categorical encoding: onehot or orthonormal")->capture_default_str();
    cmd->add_option("--calibration", cfg.calibration, "softplus[:K,C] or clip[:EPS]")->capture_default_str();
    cmd->add_option("--ridge", cfg.ridge, "Ridge penalty added to least squares")->capture_default_str();
  };
  const auto add_eval_opts = [&](CLI::App* cmd) {
    cmd->add_option("--split", cfg.split, "Training fraction per repeat")->capture_default_str();
    cmd->add_option("--repeats", cfg.repeats, "Number of random splits")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  };

  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset");
  generate->add_option("--config", cfg.config, "Generator config (JSON)")->required();
  generate->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  generate->add_option("--out", cfg.out, "Output CSV (stdout if omitted)");
  generate->add_option("--schema-out", cfg.schema_out, "Also write the matching schema");

  auto* train_cmd = app.add_subcommand("train", "Fit a model and write the model file");
  add_data(train_cmd);
  add_model_opts(train_cmd);
  train_cmd->add_option("--model", cfg.model, "Model file to write")->required();
  train_cmd->add_option("--degree", cfg.degree, "Degree m of the predicted density")->capture_default_str();
  train_cmd->add_option("--seed", cfg.seed, "Accepted for uniformity; training is deterministic");

  auto* score = app.add_subcommand("score", "Credibility scores for every record");
  score->add_option("--model", cfg.model, "Model file")->required();
  score->add_option("--input", cfg.input, "Records to score (CSV)")->required();
  score->add_option("--flag-fraction", cfg.flag_fraction, "Fraction of least credible records to flag")->capture_default_str();
  score->add_flag("--no-moments", cfg.no_moments, "Skip expected value and standard deviation");
  score->add_option("--out", cfg.out, "Output CSV (stdout if omitted)");

  auto* eval = app.add_subcommand("evaluate", "Held-out log-likelihood per degree");
  add_data(eval);
  add_model_opts(eval);
  add_eval_opts(eval);
  eval->add_option("--degrees", cfg.degrees, "Degrees, e.g. 1-9 or 1,2,4")->capture_default_str();
  eval->add_option("--out", cfg.out, "Output CSV (stdout if omitted)");

  auto* imp = app.add_subcommand("importance", "Relevance, novelty and greedy variable order");
  add_data(imp);
  add_model_opts(imp);
  add_eval_opts(imp);
  imp->add_option("--degree", cfg.degree, "Degree m of the predicted density")->capture_default_str();
  imp->add_flag("--no-greedy", cfg.no_greedy, "Skip the greedy ordering");
  imp->add_option("--out", cfg.out, "Output CSV (stdout if omitted)");

  auto* density = app.add_subcommand("density", "Predicted density curves for selected records");
  density->add_option("--model", cfg.model, "Model file")->required();
  density->add_option("--input", cfg.input, "Records (CSV)")->required();
  density->add_option("--records", cfg.records, "Comma-separated 1-based record ids (default: all)");
  density->add_option("--resolution", cfg.resolution, "Grid points per curve")->capture_default_str();
  density->add_flag("--original-scale", cfg.original_scale, "Add the back-translated (y, density) columns");
  density->add_option("--out", cfg.out, "Output CSV (stdout if omitted)");

  auto* pairs = app.add_subcommand("pairs", "Pairwise joint density grids of the target with continuous variables");
  add_data(pairs);
  pairs->add_option("--degree", cfg.pair_degree, "Maximum degree per variable")->capture_default_str();
  pairs->add_option("--basis", cfg.basis, "Orthonormal basis")->capture_default_str();
  pairs->add_option("--resolution", cfg.resolution, "Grid points per axis")->capture_default_str();
  pairs->add_option("--variable", cfg.variable, "Only this variable");
  pairs->add_option("--out", cfg.out, "Output CSV (stdout if omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*generate) cmd_generate(cfg, out);
    if (*train_cmd) cmd_train(cfg, out, err);
    if (*score) cmd_score(cfg, out);
    if (*eval) cmd_evaluate(cfg, out);
    if (*imp) cmd_importance(cfg, out);
    if (*density) cmd_density(cfg, out);
    if (*pairs) cmd_pairs(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace hcr::cli
