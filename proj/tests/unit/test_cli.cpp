#include <doctest.h>

#include <sstream>

#include "cli.hpp"
#include "hcr/dataset.hpp"
#include "support.hpp"

using namespace hcr;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

/// Generated data set with schema in a scratch directory.
struct Workspace {
  fs::path dir;
  fs::path config, data, schema, model;

  explicit Workspace(std::size_t rows, const std::string& tag) : dir(test::scratch_dir(tag)) {
    config = dir / "gen.json";
    data = dir / "data.csv";
    schema = dir / "schema.json";
    model = dir / "model.json";
    test::write_file(config, R"({"rows": )" + std::to_string(rows) + R"(, "target": "income",
      "drivers": [{"name": "group", "levels": [
        {"label": "a", "probability": 0.5, "density": [0.5]},
        {"label": "b", "probability": 0.5, "density": [-0.5]}]}],
      "noise": [{"name": "age", "kind": "continuous", "low": 18, "high": 90, "round": true, "degree": 3},
                {"name": "owner", "kind": "binary"}]})");
    REQUIRE(run({"generate", "--config", config, "--seed", "3", "--out", data, "--schema-out", schema}).code == 0);
  }
  ~Workspace() { fs::remove_all(dir); }

  Result train(const std::string& degree = "4") {
    return run({"train", "--schema", schema, "--input", data, "--model", model, "--degree", degree});
  }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("train writes a model with p x m coefficients") {
  Workspace ws(300, "train");
  const auto r = ws.train();
  REQUIRE(r.code == 0);
  CHECK(r.out.find("features p=7") != std::string::npos);
  const auto text = test::read_file(ws.model);
  CHECK(text.find("\"degree\": 4") != std::string::npos);
  CHECK(test::lines_of(text).size() > 5);
}

TEST_CASE("degree zero is a usage error") {
  Workspace ws(50, "degree0");
  const auto r = ws.train("0");
  CHECK(r.code != 0);
  CHECK(r.err.find("error") != std::string::npos);
  CHECK_FALSE(fs::exists(ws.model));
}

TEST_CASE("reruns are byte-identical") {
  Workspace ws(300, "rerun");
  REQUIRE(ws.train().code == 0);
  const auto first = test::read_file(ws.model);
  const auto data_first = test::read_file(ws.data);
  REQUIRE(run({"generate", "--config", ws.config, "--seed", "3", "--out", ws.data}).code == 0);
  CHECK(test::read_file(ws.data) == data_first);
  REQUIRE(ws.train().code == 0);
  CHECK(test::read_file(ws.model) == first);

  const std::vector<std::string> eval{"evaluate", "--schema", ws.schema, "--input", ws.data,
                                      "--degrees", "1-3", "--repeats", "2", "--seed", "9"};
  const auto a = run(eval);
  REQUIRE(a.code == 0);
  CHECK(run(eval).out == a.out);
  const auto sa = run({"score", "--model", ws.model, "--input", ws.data});
  CHECK(run({"score", "--model", ws.model, "--input", ws.data}).out == sa.out);
}

TEST_CASE("score flags exactly the requested fraction") {
  Workspace ws(100, "score");
  REQUIRE(ws.train().code == 0);
  const auto out = ws.dir / "scores.csv";
  REQUIRE(run({"score", "--model", ws.model, "--input", ws.data, "--flag-fraction", "0.05", "--out", out}).code == 0);
  const auto lines = test::lines_of(test::read_file(out));
  REQUIRE(lines.size() == 101);
  CHECK(lines[0] == "id,raw_score,calibrated_density,log2_density,flagged,expected_value,sd");
  int flagged = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) flagged += split_csv_line(lines[i]).at(4) == "1";
  CHECK(flagged == 5);
}

TEST_CASE("unseen category scores without error") {
  Workspace ws(200, "unseen");
  REQUIRE(ws.train("2").code == 0);
  const auto fresh = ws.dir / "fresh.csv";
  test::write_file(fresh, "income,group,age,owner\n1.5,zzz,40,1\n0.2,a,200,0\n");
  const auto r = run({"score", "--model", ws.model, "--input", fresh});
  REQUIRE(r.code == 0);
  CHECK(test::lines_of(r.out).size() == 3);
}

TEST_CASE("null model scores one everywhere") {
  Workspace ws(20, "null");
  // a constant target normalizes to 1/2 where f_1 vanishes, so every b^1 is 0
  const auto flat = ws.dir / "flat.csv";
  std::string csv = "income,owner\n";
  for (int i = 0; i < 40; ++i) csv += "5," + std::to_string(i % 2) + "\n";
  test::write_file(flat, csv);
  const auto schema = ws.dir / "flat_schema.json";
  test::write_file(schema, R"({"variables": [{"name": "income", "kind": "continuous", "target": true},
                                              {"name": "owner", "kind": "binary"}]})");
  REQUIRE(run({"train", "--schema", schema, "--input", flat, "--model", ws.model, "--degree", "1"}).code == 0);
  const auto r = run({"score", "--model", ws.model, "--input", flat, "--no-moments"});
  REQUIRE(r.code == 0);
  const auto lines = test::lines_of(r.out);
  REQUIRE(lines.size() == 41);
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(split_csv_line(lines[i]).at(1) == "1");
}

TEST_CASE("evaluate emits one row per degree") {
  Workspace ws(200, "evaluate");
  const auto r = run({"evaluate", "--schema", ws.schema, "--input", ws.data, "--degrees", "1,2,5", "--repeats", "2"});
  REQUIRE(r.code == 0);
  const auto lines = test::lines_of(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "degree,mean_log2_density,sd,repeats,split,seed");
  CHECK(lines[3].rfind("5,", 0) == 0);
  CHECK(run({"evaluate", "--schema", ws.schema, "--input", ws.data, "--degrees", "3-1"}).code != 0);
}

TEST_CASE("density emits R rows per record") {
  Workspace ws(200, "density");
  REQUIRE(ws.train("3").code == 0);
  const auto r = run({"density", "--model", ws.model, "--input", ws.data, "--records", "2,7", "--resolution", "25",
                      "--original-scale"});
  REQUIRE(r.code == 0);
  const auto lines = test::lines_of(r.out);
  CHECK(lines.size() == 1 + 2 * 25);
  CHECK(lines[0] == "record,x,raw,calibrated,y,original_density");
  CHECK(run({"density", "--model", ws.model, "--input", ws.data, "--records", "999"}).code != 0);
}

TEST_CASE("pairs on independent data is flat") {
  Workspace ws(4000, "pairs");
  const auto r = run({"pairs", "--schema", ws.schema, "--input", ws.data, "--resolution", "3", "--degree", "2"});
  REQUIRE(r.code == 0);
  const auto lines = test::lines_of(r.out);
  REQUIRE(lines.size() == 10);
  for (std::size_t i = 1; i < lines.size(); ++i)
    CHECK(std::stod(split_csv_line(lines[i]).at(4)) == doctest::Approx(1.0).epsilon(0.25));
}

TEST_CASE("importance ranks the driver first") {
  Workspace ws(1500, "importance");
  const auto r = run({"importance", "--schema", ws.schema, "--input", ws.data, "--degree", "1", "--repeats", "2"});
  REQUIRE(r.code == 0);
  const auto lines = test::lines_of(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "rank,variable,relevance,novelty,cumulative_log2_density");
  CHECK(split_csv_line(lines[1]).at(1) == "group");
}

TEST_CASE("errors are reported, not thrown") {
  Workspace ws(20, "errors");
  CHECK(run({}).code != 0);
  CHECK(run({"train", "--schema", ws.schema, "--input", ws.dir / "missing.csv", "--model", ws.model}).code != 0);
  const auto bad = ws.dir / "bad.csv";
  test::write_file(bad, "income,group,age,owner\n1,a,30,2\n");
  const auto r = run({"train", "--schema", ws.schema, "--input", bad, "--model", ws.model});
  CHECK(r.code == 1);
  CHECK(r.err.find("owner") != std::string::npos);
  CHECK(run({"train", "--schema", ws.schema, "--input", ws.data, "--model", ws.model, "--calibration", "bogus"}).code != 0);
  CHECK(run({"score", "--model", ws.model, "--input", ws.data, "--flag-fraction", "2"}).code != 0);
}

}
