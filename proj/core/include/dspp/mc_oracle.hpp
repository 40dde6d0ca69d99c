#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dspp/hazard_models.hpp"

namespace dspp {

struct McConfig {
  std::int64_t n_paths = 1'000'000;
  std::uint64_t seed = 20240607;
  double time_step = 1e-3;      // CIR Euler step
  double jump_trunc_eps = 0.0;  // Lévy small-jump cutoff; 0 selects it automatically
  int workers = 0;              // 0 uses the hardware concurrency

  void validate() const;
  bool operator==(const McConfig&) const = default;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_paths = 0;
  std::uint64_t seed = 0;
  std::string model_digest;
  double bias_allowance = 0.0;  // discretization allowance (CIR), 0 for exact samplers
};

/// Hex FNV-1a digest of the model, horizon and simulation settings.
std::string model_digest(const HazardModel& model, double t, double T, const McConfig& config);

/// 2·time_step·ϑ·max(κ, λ_t) for CIR, 0 otherwise.
double discretization_allowance(const HazardModel& model, double t, double T, const McConfig& config);

/// n_paths i.i.d. samples of Λ_T - Λ_t, in path order.
std::vector<double> simulate_lambda(const HazardModel& model, double t, double T, const McConfig& config);

/// Mean of f(Λ_T - Λ_t) with its standard error.
McEstimate mc_expectation(const HazardModel& model, double t, double T,
                          const std::function<double(double)>& f, const McConfig& config);

/// Average of e^{-Λ_T} Σ_{j<n} Λ_T^j / j! with Λ_T = Λ_t + ΔΛ and Λ_t from the model.
McEstimate mc_survival(const HazardModel& model, double t, double T, int n, const McConfig& config);
std::vector<McEstimate> mc_survival_curve(const HazardModel& model, double t, double T,
                                          std::span<const int> ns, const McConfig& config);

/// Indicator {Λ_T < η_1 + ... + η_n} from time 0, with the same hazard paths.
McEstimate mc_jump_times(const HazardModel& model, double T, int n, const McConfig& config);

struct CfEstimate {
  Complex u;
  Complex value;
  double std_error_re = 0.0;
  double std_error_im = 0.0;
};

/// Empirical E[e^{iu(Λ_T - Λ_t)}] at each u, sharing one set of paths.
std::vector<CfEstimate> mc_characteristic_function(const HazardModel& model, double t, double T,
                                                   std::span<const Complex> us, const McConfig& config);

}  // namespace dspp
