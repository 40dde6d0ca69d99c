#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace dspp::cli {

using nlohmann::json;

namespace {

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  int line_at(std::size_t offset) const {
    offset = std::min(offset, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
  }

  // Line of the first occurrence of "key" at or after `from`.
  int line_of(const std::string& key) const {
    const auto pos = text_.find("\"" + key + "\"");
    return pos == std::string::npos ? 1 : line_at(pos);
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ConfigError(message, line_of(key));
  }

  const json& require(const json& obj, const std::string& key, const std::string& where) const {
    if (!obj.is_object()) fail(where, "'" + where + "' must be an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(where, "missing required field '" + key + "' in " + where);
    return *it;
  }

  double number(const json& obj, const std::string& key, const std::string& where) const {
    const json& v = require(obj, key, where);
    if (!v.is_number()) fail(key, "field '" + key + "' must be a number");
    return v.get<double>();
  }

  double number_or(const json& obj, const std::string& key, double fallback) const {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number()) fail(key, "field '" + key + "' must be a number");
    return it->get<double>();
  }

  void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) const {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : obj.items()) {
      if (!ok.count(k)) fail(k, "unknown field '" + k + "' in " + where);
    }
  }

 private:
  const std::string& text_;
};

TimeKernel parse_time_kernel(const Reader& r, const json& j, const std::string& key) {
  if (j.is_number()) return TimeKernel::constant(j.get<double>());
  if (!j.is_object()) r.fail(key, "time kernel '" + key + "' must be a number or an object");
  const json& kind = r.require(j, "kind", key);
  if (!kind.is_string()) r.fail("kind", "time kernel kind must be a string");
  const auto k = kind.get<std::string>();
  try {
    if (k == "constant") {
      r.only_keys(j, {"kind", "value"}, key);
      return TimeKernel::constant(r.number(j, "value", key));
    }
    if (k == "exponential") {
      r.only_keys(j, {"kind", "scale", "rate"}, key);
      return TimeKernel::exponential(r.number(j, "scale", key), r.number(j, "rate", key));
    }
    if (k == "piecewise") {
      r.only_keys(j, {"kind", "breaks", "values"}, key);
      const json& b = r.require(j, "breaks", key);
      const json& v = r.require(j, "values", key);
      if (!b.is_array() || !v.is_array()) r.fail("breaks", "piecewise kernel needs arrays 'breaks' and 'values'");
      return TimeKernel::piecewise(b.get<std::vector<double>>(), v.get<std::vector<double>>());
    }
  } catch (const DomainError& e) {
    r.fail(key, e.what());
  } catch (const json::exception& e) {
    r.fail(key, std::string("malformed time kernel: ") + e.what());
  }
  r.fail("kind", "unknown time kernel kind '" + k + "' (expected constant, exponential, piecewise)");
}

json time_kernel_json(const TimeKernel& k) {
  switch (k.kind()) {
    case TimeKernel::Kind::constant:
      return {{"kind", "constant"}, {"value", k.scale()}};
    case TimeKernel::Kind::exponential:
      return {{"kind", "exponential"}, {"scale", k.scale()}, {"rate", k.rate()}};
    case TimeKernel::Kind::piecewise:
      return {{"kind", "piecewise"}, {"breaks", k.breaks()}, {"values", k.values()}};
  }
  return nullptr;
}

ModelSpec parse_model(const Reader& r, const json& j) {
  if (!j.is_object()) r.fail("model", "'model' must be an object");
  const json& type = r.require(j, "type", "model");
  if (!type.is_string()) r.fail("type", "model type must be a string");
  const auto name = type.get<std::string>();
  if (name == "cir") {
    r.only_keys(j, {"type", "theta", "kappa", "sigma", "lambda_t"}, "model");
    return CirModel{r.number(j, "theta", "model"), r.number(j, "kappa", "model"), r.number(j, "sigma", "model"),
                    r.number(j, "lambda_t", "model")};
  }
  if (name == "gamma_ou" || name == "ig_ou") {
    r.only_keys(j, {"type", "theta", "a", "b", "lambda0"}, "model");
    const double th = r.number(j, "theta", "model"), a = r.number(j, "a", "model"), b = r.number(j, "b", "model");
    const double l0 = r.number(j, "lambda0", "model");
    if (name == "gamma_ou") return GammaOuModel{th, a, b, l0};
    return IgOuModel{th, a, b, l0};
  }
  if (name == "cmy") {
    r.only_keys(j, {"type", "C", "M", "Y", "sigma", "lambda_t"}, "model");
    CmyModel m;
    m.C = r.number(j, "C", "model");
    m.M = r.number(j, "M", "model");
    m.Y = r.number(j, "Y", "model");
    m.sigma = j.contains("sigma") ? parse_time_kernel(r, j.at("sigma"), "sigma") : TimeKernel::constant(1.0);
    m.lambda_t = r.number_or(j, "lambda_t", 0.0);
    return m;
  }
  if (name == "levy_kernel") {
    r.only_keys(j, {"type", "sigma", "levy_density", "z_domain", "lambda_t"}, "model");
    LevyKernelSpec m;
    const json& sig = r.require(j, "sigma", "model");
    if (!sig.is_object()) r.fail("sigma", "levy_kernel sigma must be an object {time, z_power}");
    r.only_keys(sig, {"time", "z_power"}, "sigma");
    m.time = sig.contains("time") ? parse_time_kernel(r, sig.at("time"), "time") : TimeKernel::constant(1.0);
    m.z_power = r.number_or(sig, "z_power", 1.0);
    const json& nu = r.require(j, "levy_density", "model");
    r.only_keys(nu, {"type", "C", "M", "Y"}, "levy_density");
    const json& nt = r.require(nu, "type", "levy_density");
    if (!nt.is_string() || nt.get<std::string>() != "tempered_stable") {
      r.fail("levy_density", "levy_density type must be 'tempered_stable'");
    }
    m.density = {r.number(nu, "C", "levy_density"), r.number(nu, "M", "levy_density"),
                 r.number(nu, "Y", "levy_density")};
    if (j.contains("z_domain")) {
      const json& zd = j.at("z_domain");
      if (!zd.is_array() || zd.size() != 2 || !zd[0].is_number() || !(zd[1].is_number() || zd[1].is_null())) {
        r.fail("z_domain", "z_domain must be [lo, hi] with hi a number or null for infinity");
      }
      m.z_domain.lo = zd[0].get<double>();
      m.z_domain.hi = zd[1].is_null() ? std::numeric_limits<double>::infinity() : zd[1].get<double>();
    }
    m.lambda_t = r.number_or(j, "lambda_t", 0.0);
    return m;
  }
  r.fail("type", "unknown model type '" + name + "' (expected cir, gamma_ou, ig_ou, levy_kernel, cmy)");
}

json model_json(const ModelSpec& spec) {
  return std::visit(
      [](const auto& m) -> json {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, CirModel>) {
          return {{"type", "cir"}, {"theta", m.theta}, {"kappa", m.kappa}, {"sigma", m.sigma}, {"lambda_t", m.lambda_t}};
        } else if constexpr (std::is_same_v<M, GammaOuModel> || std::is_same_v<M, IgOuModel>) {
          return {{"type", std::is_same_v<M, GammaOuModel> ? "gamma_ou" : "ig_ou"},
                  {"theta", m.theta},
                  {"a", m.a},
                  {"b", m.b},
                  {"lambda0", m.lambda0}};
        } else if constexpr (std::is_same_v<M, CmyModel>) {
          return {{"type", "cmy"}, {"C", m.C},           {"M", m.M},
                  {"Y", m.Y},      {"sigma", time_kernel_json(m.sigma)}, {"lambda_t", m.lambda_t}};
        } else {
          json hi = std::isfinite(m.z_domain.hi) ? json(m.z_domain.hi) : json(nullptr);
          return {{"type", "levy_kernel"},
                  {"sigma", {{"time", time_kernel_json(m.time)}, {"z_power", m.z_power}}},
                  {"levy_density", {{"type", "tempered_stable"}, {"C", m.density.C}, {"M", m.density.M}, {"Y", m.density.Y}}},
                  {"z_domain", json::array({m.z_domain.lo, hi})},
                  {"lambda_t", m.lambda_t}};
        }
      },
      spec);
}

McConfig parse_mc(const Reader& r, const json& j) {
  if (!j.is_object()) r.fail("mc", "'mc' must be an object");
  r.only_keys(j, {"n_paths", "seed", "time_step", "jump_trunc_eps", "workers"}, "mc");
  McConfig mc;
  auto integer = [&](const char* key, auto fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer() && !it->is_number_unsigned()) r.fail(key, std::string("field '") + key + "' must be an integer");
    return it->template get<decltype(fallback)>();
  };
  mc.n_paths = integer("n_paths", mc.n_paths);
  mc.seed = integer("seed", mc.seed);
  mc.workers = integer("workers", mc.workers);
  mc.time_step = r.number_or(j, "time_step", mc.time_step);
  mc.jump_trunc_eps = r.number_or(j, "jump_trunc_eps", mc.jump_trunc_eps);
  try {
    mc.validate();
  } catch (const ConfigurationError& e) {
    r.fail("mc", e.what());
  }
  return mc;
}

RunConfig parse_run(const Reader& r, const json& j) {
  if (!j.is_object()) throw ConfigError("a run configuration must be an object", 1);
  r.only_keys(j, {"name", "model", "t", "horizons", "jump_indices", "routes", "mc", "assert_alive"}, "config");
  RunConfig c;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) r.fail("name", "'name' must be a string");
    c.name = j.at("name").get<std::string>();
  }
  c.model = parse_model(r, r.require(j, "model", "config"));
  c.t = r.number_or(j, "t", 0.0);
  if (!(c.t >= 0.0)) r.fail("t", "t must be non-negative");

  const json& hz = r.require(j, "horizons", "config");
  if (!hz.is_array() || hz.empty()) r.fail("horizons", "'horizons' must be a non-empty array of numbers");
  for (const auto& v : hz) {
    if (!v.is_number()) r.fail("horizons", "'horizons' must contain numbers only");
    c.horizons.push_back(v.get<double>());
  }
  for (std::size_t i = 0; i < c.horizons.size(); ++i) {
    if (c.horizons[i] < c.t) r.fail("horizons", "every horizon must be >= t");
    if (i > 0 && !(c.horizons[i] > c.horizons[i - 1])) r.fail("horizons", "'horizons' must be strictly increasing");
  }

  const json& ji = r.require(j, "jump_indices", "config");
  if (!ji.is_array() || ji.empty()) r.fail("jump_indices", "'jump_indices' must be a non-empty array of integers");
  for (const auto& v : ji) {
    if (!v.is_number_integer()) r.fail("jump_indices", "'jump_indices' must contain integers only");
    const int n = v.get<int>();
    if (n < 1 || n > kMaxJumpIndex) r.fail("jump_indices", "jump indices must lie in [1, 32]");
    c.jump_indices.push_back(n);
  }

  if (j.contains("mc")) c.mc = parse_mc(r, j.at("mc"));
  if (j.contains("assert_alive")) {
    if (!j.at("assert_alive").is_boolean()) r.fail("assert_alive", "'assert_alive' must be true or false");
    c.assert_alive = j.at("assert_alive").get<bool>();
  }

  HazardModel model;
  try {
    model = build_model(c.model);
    validate(model);
  } catch (const DomainError& e) {
    r.fail("model", std::string("invalid model: ") + e.what());
  }

  if (j.contains("routes")) {
    const json& rt = j.at("routes");
    if (!rt.is_array() || rt.empty()) r.fail("routes", "'routes' must be a non-empty array of route names");
    for (const auto& v : rt) {
      if (!v.is_string()) r.fail("routes", "route names must be strings");
      try {
        c.routes.push_back(parse_route(v.get<std::string>()));
      } catch (const ConfigurationError& e) {
        r.fail("routes", e.what());
      }
    }
  } else {
    c.routes.push_back(Route::bell);
    if (is_levy_driven(model)) c.routes.push_back(Route::malliavin);
    if (c.mc) c.routes.push_back(Route::monte_carlo);
  }
  for (Route route : c.routes) {
    if (route == Route::malliavin && !is_levy_driven(model)) {
      r.fail("routes", "the malliavin route needs a Levy-driven model (levy_kernel or cmy), not " + model_name(model));
    }
    if (route == Route::monte_carlo && !c.mc) c.mc = McConfig{};
  }
  return c;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const Reader r(text);
    throw ConfigError(std::string("malformed JSON: ") + e.what(), r.line_at(e.byte > 0 ? e.byte - 1 : 0));
  }
}

}  // namespace

HazardModel build_model(const ModelSpec& spec) {
  return std::visit(
      [](const auto& m) -> HazardModel {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LevyKernelSpec>) {
          LevyKernelModel k = make_levy_kernel(m.time, m.z_power, m.density, m.lambda_t);
          k.z_domain = m.z_domain;
          return k;
        } else {
          return m;
        }
      },
      spec);
}

std::vector<RunConfig> parse_configs(const std::string& text) {
  const json doc = parse_document(text);
  const Reader r(text);
  std::vector<RunConfig> out;
  if (doc.is_object() && doc.contains("suite")) {
    r.only_keys(doc, {"suite"}, "document");
    const json& suite = doc.at("suite");
    if (!suite.is_array() || suite.empty()) r.fail("suite", "'suite' must be a non-empty array of run configurations");
    for (const auto& run : suite) out.push_back(parse_run(r, run));
  } else {
    out.push_back(parse_run(r, doc));
  }
  return out;
}

RunConfig parse_config(const std::string& text) {
  auto all = parse_configs(text);
  if (all.size() != 1) throw ConfigError("expected a single run configuration, found a suite", 1);
  return all.front();
}

json to_json(const RunConfig& c) {
  json j;
  if (!c.name.empty()) j["name"] = c.name;
  j["model"] = model_json(c.model);
  j["t"] = c.t;
  j["horizons"] = c.horizons;
  j["jump_indices"] = c.jump_indices;
  json routes = json::array();
  for (Route r : c.routes) routes.push_back(route_name(r));
  j["routes"] = routes;
  if (c.mc) {
    j["mc"] = {{"n_paths", c.mc->n_paths},
               {"seed", c.mc->seed},
               {"time_step", c.mc->time_step},
               {"jump_trunc_eps", c.mc->jump_trunc_eps},
               {"workers", c.mc->workers}};
  }
  j["assert_alive"] = c.assert_alive;
  return j;
}

json suite_to_json(const std::vector<RunConfig>& configs) {
  json suite = json::array();
  for (const auto& c : configs) suite.push_back(to_json(c));
  return {{"suite", suite}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot open config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace dspp::cli
