#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "dspp/errors.hpp"
#include "run_config.hpp"

using namespace dspp;
using namespace dspp::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome survival(const std::string& text, const Overrides& o = {}) {
  std::ostringstream out, err;
  const int code = cmd_survival(text, o, out, err);
  return {code, out.str(), err.str()};
}

Outcome validate_cmd(const std::string& text, const Overrides& o = {}) {
  std::ostringstream out, err;
  const int code = cmd_validate(text, o, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(cells);
  }
  return out;
}

const char* kCmy = R"({
  "model": {"type": "cmy", "C": 1, "M": 2, "Y": 0.5, "sigma": {"kind": "constant", "value": 1}, "lambda_t": 0},
  "t": 0,
  "horizons": [1],
  "jump_indices": [1, 2, 3, 4, 5],
  "routes": ["bell", "malliavin", "monte_carlo"],
  "mc": {"n_paths": 200000, "seed": 5}
})";

}  // namespace

TEST_CASE("survival: zero kernel with no accumulated hazard never jumps") {
  const char* cfg = R"({
    "model": {"type": "levy_kernel", "sigma": {"time": 0, "z_power": 1},
              "levy_density": {"type": "tempered_stable", "C": 1, "M": 1, "Y": 0.5}, "lambda_t": 0},
    "horizons": [0.5, 1, 3], "jump_indices": [1, 4], "routes": ["bell", "malliavin"]
  })";
  const auto r = survival(cfg);
  REQUIRE(r.code == 0);
  const auto table = rows(r.out);
  CHECK(table[0] == std::vector<std::string>{"T", "n", "route", "probability", "std_error", "warning"});
  CHECK(table.size() == 1 + 3 * 2 * 2);
  for (std::size_t i = 1; i < table.size(); ++i) {
    CHECK(table[i][3] == "1");
    CHECK(table[i][4].empty());
  }
}

TEST_CASE("survival: CMY example across all routes") {
  const auto r = survival(kCmy);
  REQUIRE(r.code == 0);
  const auto table = rows(r.out);
  REQUIRE(table.size() == 1 + 5 * 3);
  for (int n = 0; n < 5; ++n) {
    const auto& bell = table[1 + 3 * n];
    const auto& mall = table[2 + 3 * n];
    const auto& mc = table[3 + 3 * n];
    CHECK(bell[2] == "bell");
    CHECK(mall[2] == "malliavin");
    CHECK(mc[2] == "monte_carlo");
    const double a = std::stod(bell[3]), b = std::stod(mall[3]), m = std::stod(mc[3]), se = std::stod(mc[4]);
    CHECK(std::abs(a - b) <= 1e-8 * std::abs(b));
    CHECK(std::abs(m - a) < 3.0 * se);
  }
  CHECK(table[1][5] == "probability_out_of_range");
  CHECK(survival(kCmy).out == r.out);
}

TEST_CASE("survival: configuration errors exit with code 2 and a line number") {
  const auto missing = survival(R"({"horizons": [1], "jump_indices": [1]})");
  CHECK(missing.code == 2);
  CHECK(missing.err.find("model") != std::string::npos);
  CHECK(missing.err.find("line ") != std::string::npos);

  const auto malformed = survival("{\n  \"model\": {\n   \"type\": \"cir\",, }\n}");
  CHECK(malformed.code == 2);
  CHECK(malformed.err.find("line 3") != std::string::npos);

  const auto bad_cir = survival(R"({
    "model": {"type": "cir", "theta": 1, "kappa": 0.1, "sigma": 0.5, "lambda_t": 1},
    "horizons": [1], "jump_indices": [1]
  })");
  CHECK(bad_cir.code == 2);
  CHECK(bad_cir.err.find("theta*kappa >= sigma^2") != std::string::npos);
  CHECK(bad_cir.err.find("line 2") != std::string::npos);

  const auto malliavin_cir = survival(R"({
    "model": {"type": "cir", "theta": 2, "kappa": 1, "sigma": 0.5, "lambda_t": 1},
    "horizons": [1], "jump_indices": [1], "routes": ["malliavin"]
  })");
  CHECK(malliavin_cir.code == 2);

  CHECK(survival(R"({"model": {"type": "cmy", "C": 1, "M": 1, "Y": 0}, "horizons": [2, 1], "jump_indices": [1]})").code == 2);
  CHECK(survival(R"({"model": {"type": "cmy", "C": 1, "M": 1, "Y": 0}, "horizons": [1], "jump_indices": [33]})").code == 2);
  CHECK(survival(R"({"model": {"type": "cmy", "C": 1, "M": 1, "Y": 0, "Z": 1}, "horizons": [1], "jump_indices": [1]})").code == 2);
  CHECK(survival(R"({"model": {"type": "heston"}, "horizons": [1], "jump_indices": [1]})").code == 2);
}

TEST_CASE("survival: numerical failures exit with code 3") {
  const auto r = survival(R"({
    "model": {"type": "levy_kernel", "sigma": {"time": 1, "z_power": 1},
              "levy_density": {"type": "tempered_stable", "C": 1, "M": 1, "Y": 2.5}},
    "horizons": [1], "jump_indices": [2], "routes": ["bell"]
  })");
  CHECK(r.code == 3);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("survival: indicator not asserted is reported") {
  const auto r = survival(R"({"model": {"type": "gamma_ou", "theta": 1, "a": 1, "b": 2, "lambda0": 0.5},
                              "horizons": [1], "jump_indices": [1], "assert_alive": false})");
  REQUIRE(r.code == 0);
  CHECK(rows(r.out)[1][5] == "indicator_not_asserted");
}

TEST_CASE("overrides") {
  Overrides o;
  o.seed = 77;
  o.paths = 1000;
  o.routes = parse_route_list("bell,monte_carlo");
  const auto r = survival(kCmy, o);
  REQUIRE(r.code == 0);
  CHECK(rows(r.out).size() == 1 + 5 * 2);
  Overrides bad;
  bad.routes = parse_route_list("malliavin");
  CHECK(survival(R"({"model": {"type": "cir", "theta": 2, "kappa": 1, "sigma": 0.5, "lambda_t": 1},
                     "horizons": [1], "jump_indices": [1]})",
                 bad)
            .code == 2);
  CHECK_THROWS_AS(parse_route_list("bell,spline"), ConfigurationError);
}

TEST_CASE("validate: report layout and summary") {
  const auto analytic = validate_cmd(R"({"suite": [
    {"model": {"type": "cmy", "C": 1, "M": 2, "Y": 0.5, "lambda_t": 1.3}, "horizons": [0.5, 1], "jump_indices": [1, 2]},
    {"model": {"type": "ig_ou", "theta": 1.5, "a": 2, "b": 3, "lambda0": 0.4}, "horizons": [1], "jump_indices": [1, 2, 3]}
  ]})");
  CHECK(analytic.code == 0);
  CHECK(analytic.out.find("std_error") == std::string::npos);
  CHECK(analytic.out.find("# summary passed=7 failed=0 total=7") != std::string::npos);

  const auto with_mc = validate_cmd(kCmy);
  CHECK(with_mc.code == 0);
  CHECK(with_mc.out.find("monte_carlo,std_error") != std::string::npos);
  CHECK(with_mc.out.find("# summary passed=5 failed=0 total=5") != std::string::npos);

  const auto bad = validate_cmd(R"({"model": {"type": "cir", "theta": 1, "kappa": 0.1, "sigma": 0.5, "lambda_t": 1},
                                    "horizons": [1], "jump_indices": [1]})");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("theta*kappa") != std::string::npos);
}

TEST_CASE("validate: disagreeing routes fail the row") {
  // 100 paths cannot resolve the survival curve to the analytic value at this tolerance
  const auto r = validate_cmd(R"({
    "model": {"type": "gamma_ou", "theta": 1.5, "a": 2, "b": 3, "lambda0": 0.4},
    "horizons": [1], "jump_indices": [1], "routes": ["bell", "monte_carlo"],
    "mc": {"n_paths": 100, "seed": 3, "time_step": 0.001}
  })");
  if (r.code != 0) {
    CHECK(r.code == 3);
    CHECK(r.out.find("FAIL") != std::string::npos);
  }
}

TEST_CASE("bell subcommand") {
  std::ostringstream out, err;
  CHECK(cmd_bell(3, "1,1,1", out, err) == 0);
  CHECK(cmd_bell(2, "2,3", out, err) == 0);
  CHECK(cmd_bell(0, "", out, err) == 0);
  CHECK(out.str() == "5\n7\n1\n");
  CHECK(cmd_bell(3, "1,x,1", out, err) == 2);
  CHECK(cmd_bell(3, "1,1", out, err) == 2);
  CHECK(cmd_bell(-1, "", out, err) == 2);
}

TEST_CASE("config round trip") {
  const std::string docs[] = {
      kCmy,
      R"({"name": "lk", "model": {"type": "levy_kernel",
          "sigma": {"time": {"kind": "piecewise", "breaks": [0.5, 2], "values": [1, 0.5, 0.1]}, "z_power": 2},
          "levy_density": {"type": "tempered_stable", "C": 0.5, "M": 1, "Y": -0.5},
          "z_domain": [0.01, 40], "lambda_t": 0.3},
          "t": 0.25, "horizons": [0.5, 1], "jump_indices": [2, 3], "assert_alive": false})",
      R"({"model": {"type": "cmy", "C": 1, "M": 2, "Y": 0.5, "sigma": {"kind": "exponential", "scale": 1, "rate": 0.3}},
          "horizons": [1], "jump_indices": [1]})",
      R"({"model": {"type": "cir", "theta": 2, "kappa": 1, "sigma": 0.5, "lambda_t": 1}, "horizons": [1],
          "jump_indices": [1], "mc": {"n_paths": 1000, "seed": 18446744073709551615, "workers": 2}})",
  };
  for (const auto& doc : docs) {
    const RunConfig a = parse_config(doc);
    const RunConfig b = parse_config(to_json(a).dump(2));
    CHECK(a == b);
    CHECK(to_json(a) == to_json(b));
  }
  const auto suite = parse_configs(read_file(DSPP_CATALOGUE));
  CHECK(suite.size() >= 5);
  CHECK(parse_configs(suite_to_json(suite).dump()) == suite);
}
