#pragma once

#include <string>
#include <vector>

#include "dspp/hazard_models.hpp"
#include "dspp/numerics.hpp"

namespace dspp {

enum class Route { bell, malliavin, monte_carlo };

std::string route_name(Route r);
Route parse_route(const std::string& name);

struct SurvivalDiagnostics {
  std::vector<std::string> warnings;
  bool analytic_derivatives = true;  // false when Ψ was differentiated on a circle
  double cauchy_disagreement = 0.0;
};

/// P(τ_n > T | F_t) without the indicator 1{τ_n > t}, which the caller owns.
struct SurvivalResult {
  double probability = 0.0;
  std::vector<double> terms;  // k-indexed summands, k = 0..n-1
  Route route = Route::bell;
  SurvivalDiagnostics diagnostics;
};

inline constexpr int kMaxJumpIndex = 32;

/// Bell-polynomial formula: Σ_{k<n} e^{c0}/k! B_k(c_1..c_k).
SurvivalResult survival_thm1(const HazardModel& model, double t, double T, int n,
                             const CauchySettings& cauchy = {}, const QuadratureSettings& quad = {});

/// The same sum from precomputed derivatives (needs derivs.order() >= n-1).
SurvivalResult survival_from_derivatives(const CumulantDerivatives& derivs, int n);

/// Appends "probability_out_of_range" when p leaves [-1e-9, 1 + 1e-9].
void flag_probability_range(SurvivalResult& result);

}  // namespace dspp
