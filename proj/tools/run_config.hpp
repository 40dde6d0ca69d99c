#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "dspp/errors.hpp"
#include "dspp/hazard_models.hpp"
#include "dspp/mc_oracle.hpp"
#include "dspp/survival.hpp"

namespace dspp::cli {

/// Serializable form of LevyKernelModel: σ(s,z) = time(s)·z^z_power.
struct LevyKernelSpec {
  TimeKernel time = TimeKernel::constant(1.0);
  double z_power = 1.0;
  TemperedStableDensity density;
  ZDomain z_domain;
  double lambda_t = 0.0;

  bool operator==(const LevyKernelSpec&) const = default;
};

using ModelSpec = std::variant<CirModel, GammaOuModel, IgOuModel, LevyKernelSpec, CmyModel>;

HazardModel build_model(const ModelSpec& spec);

struct RunConfig {
  std::string name;
  ModelSpec model;
  double t = 0.0;
  std::vector<double> horizons;
  std::vector<int> jump_indices;
  std::vector<Route> routes;
  std::optional<McConfig> mc;
  bool assert_alive = true;

  bool operator==(const RunConfig&) const = default;
};

/// Input problem tied to a line of the source document.
class ConfigError : public ConfigurationError {
 public:
  ConfigError(const std::string& message, int line)
      : ConfigurationError("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses either a single run or {"suite": [run, ...]}.
std::vector<RunConfig> parse_configs(const std::string& text);
RunConfig parse_config(const std::string& text);

nlohmann::json to_json(const RunConfig& config);
nlohmann::json suite_to_json(const std::vector<RunConfig>& configs);

std::string read_file(const std::string& path);

}  // namespace dspp::cli
