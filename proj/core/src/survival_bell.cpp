#include <cmath>

#include "dspp/bell.hpp"
#include "dspp/errors.hpp"
#include "dspp/survival.hpp"

namespace dspp {

std::string route_name(Route r) {
  switch (r) {
    case Route::bell:
      return "bell";
    case Route::malliavin:
      return "malliavin";
    case Route::monte_carlo:
      return "monte_carlo";
  }
  return "unknown";
}

Route parse_route(const std::string& name) {
  if (name == "bell") return Route::bell;
  if (name == "malliavin") return Route::malliavin;
  if (name == "monte_carlo" || name == "mc") return Route::monte_carlo;
  throw ConfigurationError("unknown route '" + name + "' (expected bell, malliavin or monte_carlo)");
}

void flag_probability_range(SurvivalResult& result) {
  if (!(result.probability >= -1e-9 && result.probability <= 1.0 + 1e-9)) {
    result.diagnostics.warnings.emplace_back("probability_out_of_range");
  }
}

SurvivalResult survival_from_derivatives(const CumulantDerivatives& derivs, int n) {
  if (n < 1 || n > kMaxJumpIndex) throw DomainError("jump index n must lie in [1, 32]");
  if (derivs.order() < n - 1) throw DomainError("too few cgf derivatives for the requested jump index");
  const std::vector<double> c(derivs.c.begin(), derivs.c.begin() + (n - 1));
  const auto b = bell::complete_bell_all<double>(n - 1, c);
  SurvivalResult out;
  out.route = Route::bell;
  const double scale = std::exp(derivs.c0);
  double factorial_k = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k > 0) factorial_k *= k;
    out.terms.push_back(scale * b[k] / factorial_k);
  }
  out.probability = 0.0;
  for (double v : out.terms) out.probability += v;
  out.diagnostics.analytic_derivatives = derivs.analytic;
  out.diagnostics.cauchy_disagreement = derivs.cauchy_disagreement;
  if (derivs.accuracy_warning) out.diagnostics.warnings.emplace_back("cauchy_accuracy");
  flag_probability_range(out);
  return out;
}

SurvivalResult survival_thm1(const HazardModel& model, double t, double T, int n, const CauchySettings& cauchy,
                             const QuadratureSettings& quad) {
  if (n < 1 || n > kMaxJumpIndex) throw DomainError("jump index n must lie in [1, 32]");
  const auto derivs = cgf_derivatives_at_i(model, t, T, n - 1, cauchy, quad);
  return survival_from_derivatives(derivs, n);
}

}  // namespace dspp
