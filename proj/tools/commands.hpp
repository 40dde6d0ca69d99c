#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace dspp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> paths;
  std::optional<std::vector<Route>> routes;
};

/// Applies command-line overrides. Strict mode rejects a malliavin route on
/// rate models; otherwise inapplicable routes are dropped per run.
void apply_overrides(RunConfig& config, const Overrides& overrides, bool strict);

std::vector<Route> parse_route_list(const std::string& list);

/// CSV T,n,route,probability,std_error,warning. Returns the exit code.
int cmd_survival(const std::string& config_text, const Overrides& overrides, std::ostream& out, std::ostream& err);

/// Validation report and "# summary passed=.. failed=.. total=.." line.
int cmd_validate(const std::string& config_text, const Overrides& overrides, std::ostream& out, std::ostream& err);

/// Complete Bell polynomial B_n(xs), 15 significant digits.
int cmd_bell(int n, const std::string& xs, std::ostream& out, std::ostream& err);

std::string format_number(double x, int digits = 12);

}  // namespace dspp::cli
