#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "dspp/bell.hpp"
#include "dspp/malliavin.hpp"

namespace dspp::cli {

namespace {

constexpr double kAnalyticTolerance = 1e-6;
constexpr double kMcSigmas = 3.0;

struct RouteValue {
  double probability = 0.0;
  std::optional<double> std_error;
  double allowance = 0.0;
  std::vector<std::string> warnings;
};

// values[T index][n index][route]
using Grid = std::vector<std::vector<std::map<Route, RouteValue>>>;

Grid evaluate(const RunConfig& c) {
  const HazardModel model = build_model(c.model);
  const int n_max = *std::max_element(c.jump_indices.begin(), c.jump_indices.end());
  Grid grid(c.horizons.size(), std::vector<std::map<Route, RouteValue>>(c.jump_indices.size()));
  for (std::size_t ti = 0; ti < c.horizons.size(); ++ti) {
    const double T = c.horizons[ti];
    for (Route route : c.routes) {
      if (route == Route::bell) {
        const auto d = cgf_derivatives_at_i(model, c.t, T, n_max - 1);
        for (std::size_t ni = 0; ni < c.jump_indices.size(); ++ni) {
          const auto s = survival_from_derivatives(d, c.jump_indices[ni]);
          grid[ti][ni][route] = {s.probability, std::nullopt, 0.0, s.diagnostics.warnings};
        }
      } else if (route == Route::malliavin) {
        const auto m = malliavin_moments(model, c.t, T, n_max);
        for (std::size_t ni = 0; ni < c.jump_indices.size(); ++ni) {
          const auto s = survival_from_moments(m, accumulated_hazard(model), c.jump_indices[ni]);
          grid[ti][ni][route] = {s.probability, std::nullopt, 0.0, s.diagnostics.warnings};
        }
      } else {
        const auto est = mc_survival_curve(model, c.t, T, c.jump_indices, *c.mc);
        for (std::size_t ni = 0; ni < c.jump_indices.size(); ++ni) {
          RouteValue v{est[ni].mean, est[ni].std_error, est[ni].bias_allowance, {}};
          if (!(v.probability >= -1e-9 && v.probability <= 1.0 + 1e-9)) v.warnings.emplace_back("probability_out_of_range");
          grid[ti][ni][route] = v;
        }
      }
    }
    if (!c.assert_alive) {
      for (auto& cell : grid[ti])
        for (auto& [route, v] : cell) v.warnings.emplace_back("indicator_not_asserted");
    }
  }
  return grid;
}

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : ";") + x;
  return s;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigurationError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

std::vector<RunConfig> load(const std::string& text, const Overrides& o, bool strict) {
  auto configs = parse_configs(text);
  for (auto& c : configs) apply_overrides(c, o, strict);
  return configs;
}

}  // namespace

std::string format_number(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::vector<Route> parse_route_list(const std::string& list) {
  std::vector<Route> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_route(item));
  }
  if (out.empty()) throw ConfigurationError("--routes needs at least one route");
  return out;
}

void apply_overrides(RunConfig& c, const Overrides& o, bool strict) {
  if (o.routes) {
    const bool levy = is_levy_driven(build_model(c.model));
    c.routes.clear();
    for (Route r : *o.routes) {
      if (r == Route::malliavin && !levy) {
        if (strict) throw ConfigurationError("the malliavin route needs a Levy-driven model (levy_kernel or cmy)");
        continue;
      }
      c.routes.push_back(r);
    }
    if (c.routes.empty()) throw ConfigurationError("no applicable route left after --routes");
  }
  const bool wants_mc = std::find(c.routes.begin(), c.routes.end(), Route::monte_carlo) != c.routes.end();
  if ((o.seed || o.paths || wants_mc) && !c.mc) c.mc = McConfig{};
  if (o.seed) c.mc->seed = *o.seed;
  if (o.paths) c.mc->n_paths = *o.paths;
  if (c.mc) c.mc->validate();
}

int cmd_survival(const std::string& text, const Overrides& overrides, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto configs = load(text, overrides, true);
    std::ostringstream buf;
    buf << "T,n,route,probability,std_error,warning\n";
    for (const auto& c : configs) {
      if (configs.size() > 1) buf << "# case " << (c.name.empty() ? model_name(build_model(c.model)) : c.name) << "\n";
      const Grid grid = evaluate(c);
      for (std::size_t ti = 0; ti < c.horizons.size(); ++ti) {
        for (std::size_t ni = 0; ni < c.jump_indices.size(); ++ni) {
          for (Route r : c.routes) {
            const auto& v = grid[ti][ni].at(r);
            buf << format_number(c.horizons[ti]) << "," << c.jump_indices[ni] << "," << route_name(r) << ","
                << format_number(v.probability) << "," << (v.std_error ? format_number(*v.std_error) : "") << ","
                << join(v.warnings) << "\n";
          }
        }
      }
    }
    out << buf.str();
    return kExitOk;
  });
}

int cmd_validate(const std::string& text, const Overrides& overrides, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto configs = load(text, overrides, false);
    const bool any_mc = std::any_of(configs.begin(), configs.end(), [](const RunConfig& c) {
      return std::find(c.routes.begin(), c.routes.end(), Route::monte_carlo) != c.routes.end();
    });
    std::ostringstream buf;
    buf << "case,model,T,n,bell,malliavin";
    if (any_mc) buf << ",monte_carlo,std_error,mc_abs_dev,mc_tolerance";
    buf << ",analytic_rel_dev,status,warning\n";
    int passed = 0, failed = 0;
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
      const auto& c = configs[ci];
      const HazardModel model = build_model(c.model);
      const Grid grid = evaluate(c);
      for (std::size_t ti = 0; ti < c.horizons.size(); ++ti) {
        for (std::size_t ni = 0; ni < c.jump_indices.size(); ++ni) {
          const auto& cell = grid[ti][ni];
          auto get = [&](Route r) -> const RouteValue* {
            const auto it = cell.find(r);
            return it == cell.end() ? nullptr : &it->second;
          };
          const RouteValue* bell = get(Route::bell);
          const RouteValue* mall = get(Route::malliavin);
          const RouteValue* mc = get(Route::monte_carlo);
          bool ok = true;
          std::string rel_dev;
          if (bell && mall) {
            const double dev = std::abs(bell->probability - mall->probability) /
                               std::max(std::abs(mall->probability), 1e-300);
            ok = ok && dev <= kAnalyticTolerance;
            rel_dev = format_number(dev, 3);
          }
          std::string mc_dev, mc_tol;
          if (mc && (bell || mall)) {
            double worst = 0.0;
            for (const RouteValue* a : {bell, mall}) {
              if (a) worst = std::max(worst, std::abs(a->probability - mc->probability));
            }
            const double tol = kMcSigmas * mc->std_error.value_or(0.0) + mc->allowance;
            ok = ok && worst <= tol;
            mc_dev = format_number(worst, 3);
            mc_tol = format_number(tol, 3);
          }
          (ok ? passed : failed)++;
          std::vector<std::string> warnings;
          for (const auto& [r, v] : cell)
            for (const auto& w : v.warnings)
              if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
          const std::string label = c.name.empty() ? "case" + std::to_string(ci + 1) : c.name;
          buf << label << "," << model_name(model) << "," << format_number(c.horizons[ti]) << "," << c.jump_indices[ni]
              << "," << (bell ? format_number(bell->probability) : "") << ","
              << (mall ? format_number(mall->probability) : "");
          if (any_mc) {
            buf << "," << (mc ? format_number(mc->probability) : "") << ","
                << (mc && mc->std_error ? format_number(*mc->std_error) : "") << "," << mc_dev << "," << mc_tol;
          }
          buf << "," << rel_dev << "," << (ok ? "PASS" : "FAIL") << "," << join(warnings) << "\n";
        }
      }
    }
    buf << "# summary passed=" << passed << " failed=" << failed << " total=" << (passed + failed) << "\n";
    out << buf.str();
    if (failed > 0) {
      err << "validation failed for " << failed << " of " << (passed + failed) << " rows\n";
      return kExitNumerical;
    }
    return kExitOk;
  });
}

int cmd_bell(int n, const std::string& xs, std::ostream& out, std::ostream& err) {
  std::vector<double> values;
  std::stringstream ss(xs);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size() || !std::isfinite(v)) {
      err << "config error: malformed Bell argument '" << item << "'\n";
      return kExitInput;
    }
    values.push_back(v);
  }
  if (n < 0 || n > bell::kMaxOrder) {
    err << "config error: n must lie in [0, " << bell::kMaxOrder << "]\n";
    return kExitInput;
  }
  if (static_cast<int>(values.size()) < n) {
    err << "config error: B_" << n << " needs " << n << " arguments, got " << values.size() << "\n";
    return kExitInput;
  }
  values.resize(n);
  out << format_number(bell::complete_bell_recurrence<double>(n, values), 15) << "\n";
  return kExitOk;
}

}  // namespace dspp::cli
