#include <doctest.h>

#include <sstream>

#include "hcr/error.hpp"
#include "hcr/model_io.hpp"
#include "hcr/predict.hpp"
#include "hcr/regression.hpp"
#include "support.hpp"

using namespace hcr;

namespace {

TrainedModel sample_model(CategoricalEncoding encoding = CategoricalEncoding::onehot) {
  auto cfg = test::null_config(300);
  cfg.drivers = test::two_category_config(300).drivers;
  const auto data = generate_synthetic(cfg, 12);
  TrainOptions opts;
  opts.degree = 3;
  opts.encoding = encoding;
  opts.calibration = CalibrationSpec::softplus(4, 3);
  opts.ridge = 1e-3;
  return train(data, opts).model;
}

std::string saved(const TrainedModel& model) {
  std::ostringstream out;
  save_model(out, model);
  return out.str();
}

TrainedModel reloaded(const std::string& text) {
  std::istringstream in(text);
  return load_model(in);
}

}  // namespace

TEST_SUITE("model_io") {

TEST_CASE("save, load, save is byte-identical") {
  for (auto enc : {CategoricalEncoding::onehot, CategoricalEncoding::orthonormal}) {
    const auto model = sample_model(enc);
    const auto text = saved(model);
    const auto back = reloaded(text);
    CHECK(saved(back) == text);
    CHECK(back.beta == model.beta);
    CHECK(back.degree == model.degree);
    CHECK(back.calibration == model.calibration);
    CHECK(back.ridge == model.ridge);
    CHECK(back.schema() == model.schema());
    CHECK(back.layout.size() == model.layout.size());
    CHECK(back.target().sorted_y() == model.target().sorted_y());
  }
}

TEST_CASE("reloaded model scores identically") {
  const auto model = sample_model();
  const auto back = reloaded(saved(model));
  const auto data = generate_synthetic([] {
    auto cfg = test::null_config(50);
    cfg.drivers = test::two_category_config(50).drivers;
    return cfg;
  }(), 13);
  const auto a = score_dataset(model, data, {});
  const auto b = score_dataset(back, data, {});
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].raw_score == b[i].raw_score);
    CHECK(a[i].expected == b[i].expected);
  }
}

TEST_CASE("file format header") {
  const auto text = saved(sample_model());
  CHECK(text.find("\"format\": \"hcr-model\"") != std::string::npos);
  CHECK(text.find("\"prng\": \"mt19937_64\"") != std::string::npos);
}

TEST_CASE("corrupt files are rejected") {
  const auto text = saved(sample_model());
  auto replace = [&](const std::string& from, const std::string& to) {
    auto t = text;
    t.replace(t.find(from), from.size(), to);
    return t;
  };
  CHECK_THROWS_AS(reloaded("not json"), ParseError);
  CHECK_THROWS_AS(reloaded(replace("\"hcr-model\"", "\"other\"")), ParseError);
  CHECK_THROWS_AS(reloaded(replace("\"version\": 1", "\"version\": 99")), ParseError);
  CHECK_THROWS_AS(reloaded(replace("\"degree\": 3", "\"degree\": 4")), ParseError);
  CHECK_THROWS_AS(load_model(std::filesystem::path("/nonexistent/model.json")), ParseError);
}

}
