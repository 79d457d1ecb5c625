#include <doctest.h>

#include <clocale>
#include <filesystem>
#include <fstream>

#include "catsynth/error.hpp"
#include "catsynth/report.hpp"

using namespace catsynth;
using namespace catsynth::report;

namespace {

ErrorKind parse_error_kind(const std::string& text) {
  try {
    parse_job(json::parse(text));
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::NonConvergence;  // sentinel: accepted
}

}  // namespace

TEST_CASE("job parsing") {
  const Job fixed = parse_job(json::parse(R"({
    "input": {"kind": "coherent", "gamma": [0.5, -0.25]},
    "aux_photons": [2, 1],
    "bs_theta": [0.4, 0.9],
    "aux_alpha": [[0.1, 0.2], [0, -1]],
    "alpha0": 0.3,
    "target": {"beta": 1.5, "parity": "odd"},
    "cutoff": 45
  })"));
  CHECK(fixed.fully_specified());
  CHECK(fixed.space.fixed.input.gamma == Complex(0.5, -0.25));
  CHECK(fixed.space.fixed.aux_alpha[1] == Complex(0.0, -1.0));
  CHECK(fixed.space.fixed.cutoff == 45);
  CHECK(fixed.target()->beta() == 1.5);
  CHECK(fixed.target()->parity() == Parity::Odd);

  const Job free = parse_job(json::parse(R"({
    "input": {"kind": "coherent", "gamma": "free"},
    "aux_photons": [3],
    "bs_theta": "free", "aux_alpha": "free", "alpha0": "free",
    "target": {"parity": "even"},
    "optimizer": {"restarts": 5, "seed": 77, "bounds": {"theta": [0.2, 1.2], "alpha": 2}}
  })"));
  CHECK(free.space.dimension() == 1 + 2 + 1 + 2);
  CHECK(free.budget.restarts == 5);
  CHECK(free.budget.seed == 77);
  CHECK(free.space.free[0].lo == 0.2);
  CHECK(free.space.free[1].hi == 2.0);
  CHECK(!free.target());

  const Job kitten = parse_job(json::parse(
      R"({"input": {"kind": "kitten", "beta_in": 1, "parity": "odd"}, "aux_photons": [1, 1]})"));
  CHECK(kitten.space.fixed.input.kind == InputSpec::Kind::Kitten);
  CHECK(kitten.space.dimension() == 7);
}

TEST_CASE("job schema violations") {
  for (const char* doc : {
           R"([1, 2])",
           R"({"aux_photons": [1]})",
           R"({"input": {"kind": "laser"}, "aux_photons": [1]})",
           R"({"input": {"kind": "fock"}, "aux_photons": [1]})",
           R"({"input": {"kind": "vacuum"}, "aux_photons": []})",
           R"({"input": {"kind": "vacuum"}, "aux_photons": [-1]})",
           R"({"input": {"kind": "vacuum"}, "aux_photons": [1], "bs_theta": [0.1, 0.2]})",
           R"({"input": {"kind": "vacuum"}, "aux_photons": [1], "aux_alpha": [[1]]})",
           R"({"input": {"kind": "vacuum"}, "aux_photons": [1], "target": {"beta": 1}})",
           R"({"input": {"kind": "vacuum"}, "aux_photons": [1], "target": {"parity": "weird"}})",
           R"({"input": {"kind": "kitten", "beta_in": -1}, "aux_photons": [1]})",
           R"({"input": {"kind": "vacuum"}, "aux_photons": [1], "optimizer": {"restarts": 0}})",
       }) {
    CAPTURE(doc);
    CHECK(parse_error_kind(doc) == ErrorKind::InvalidArgument);
  }
  CHECK_THROWS_AS(load_job("/nonexistent/config.json"), Error);
}

TEST_CASE("config digest is stable and key-order independent") {
  const json a = json::parse(R"({"b": 1, "a": [1, 2]})");
  const json b = json::parse(R"({"a": [1, 2], "b": 1})");
  CHECK(config_digest(a) == config_digest(b));
  CHECK(config_digest(a).size() == 16);
  CHECK(config_digest(a) != config_digest(json::parse(R"({"a": [2, 1], "b": 1})")));
  // FNV-1a 64 of the empty object "{}"
  CHECK(config_digest(json::object()) == "08f44b07b5901a25");
}

TEST_CASE("number formatting is fixed and locale independent") {
  std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2.0 / 3.0) == "0.666666667");
  CHECK(format_number(1234567891.0) == "1.23456789e+09");
  CHECK(format_number(-2.5e-7) == "-2.5e-07");
  CHECK(format_number(std::nan("")) == "nan");
  std::setlocale(LC_NUMERIC, "C");
}

TEST_CASE("CSV table and manifest files") {
  CsvTable t({"case", "value"});
  t.add_row({"a,b", "1"});
  t.add_row({"say \"hi\"", "2"});
  CHECK(t.rows() == 2);
  CHECK(t.str() == "case,value\n\"a,b\",1\n\"say \"\"hi\"\"\",2\n");
  CHECK_THROWS_AS(t.add_row({"only one"}), Error);

  const auto dir = std::filesystem::temp_directory_path() / "catsynth_report_test";
  std::filesystem::create_directories(dir);
  t.write(dir / "t.csv");
  write_manifest(dir / "t.csv", {"cmd", "0123456789abcdef", 5, "1.0", 0.5});
  std::ifstream in(dir / "t.csv.manifest.json");
  const json m = json::parse(in);
  CHECK(m["seed"] == 5);
  CHECK(m["config_digest"] == "0123456789abcdef");
  CHECK(m.contains("wall_time_seconds"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("result serialization") {
  SchemeConfig c;
  c.input = InputSpec::kitten(0.5, Parity::Odd);
  c.aux_photons = {1};
  c.bs_theta = {0.4};
  c.aux_alpha = {Complex(0.1, 0.2)};
  const json j = to_json(c);
  CHECK(j["input"]["kind"] == "kitten");
  // the serialized config parses back to the same config
  const Job back = parse_job(j);
  CHECK(back.space.fixed.input.beta_in == 0.5);
  CHECK(back.space.fixed.aux_alpha[0] == Complex(0.1, 0.2));
  CHECK(back.fully_specified());

  const ConditionalResult r = run_scheme(c, CatSpec(1.0, Parity::Odd));
  const json jr = to_json(r);
  CHECK(jr["amplitudes"].size() == r.state.size());
  CHECK(jr["success_probability"] == r.success_probability);
  CHECK(jr.contains("fidelity"));
}

TEST_CASE("recipes") {
  const auto t1 = table_cells("table1");
  REQUIRE(t1.size() == 6);
  const std::vector<double> f1{0.957, 0.947, 0.971, 0.967, 0.97, 0.963};
  for (std::size_t i = 0; i < 6; ++i) CHECK(*t1[i].ref_fidelity == f1[i]);
  CHECK(t1[4].beta == 2.25);
  CHECK(t1[0].aux_photons.size() == 2);

  const auto t3 = table_cells("table3");
  REQUIRE(t3.size() == 6);
  const std::vector<double> f3{0.963, 0.977, 0.981, 0.958, 0.984, 0.98};
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(*t3[i].ref_fidelity == f3[i]);
    CHECK(t3[i].input.kind == InputSpec::Kind::Kitten);
    CHECK(t3[i].input.parity == t3[i].parity);
  }
  CHECK(table_cells("table2").size() == 2);
  CHECK(table_cells("fig2").front().aux_photons.size() == 5);
  CHECK_THROWS_AS(table_cells("table9"), Error);
  CHECK(is_table_recipe("table2"));
  CHECK(!is_table_recipe("fig7"));
  CHECK(figure_series("fig8").size() == 6);
  CHECK_THROWS_AS(figure_series("fig1"), Error);
  CHECK(recipe_names().size() == 7);

  RecipeRow row;
  row.cell = t1[0];
  row.fidelity = 0.96;
  row.probability = 0.01;
  row.pass = true;
  const std::string csv = recipe_table({row}).str();
  CHECK(csv.rfind("case,parity,beta,fidelity,probability,paper_fidelity,paper_probability,pass\n", 0) == 0);
  CHECK(csv.find("(iii) 4-4-4,even,2.5,0.96,0.01,0.957,0.0188,true") != std::string::npos);

  const std::string gp = gnuplot_script("fig8.csv", {"kitten 1 (1-1)"});
  CHECK(gp.find("'fig8.csv'") != std::string::npos);
  CHECK(gp.find("strcol(1) eq 'kitten 1 (1-1)'") != std::string::npos);
}
