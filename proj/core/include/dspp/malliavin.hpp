#pragma once

#include <vector>

#include "dspp/hazard_models.hpp"
#include "dspp/survival.hpp"

namespace dspp {

/// Kernel integrals shared by every step of the recursion.
struct KernelIntegrals {
  double log_m0 = 0.0;         // ∫∫ (e^{-σ} - 1 + σ)
  double i_a = 0.0;            // ∫∫ (e^{-σ} - 1) σ
  std::vector<double> i_k;     // i_k[k-1] = ∫∫ e^{-σ} σ^{k+1}
};

/// m_r = E[(Λ_T - Λ_t)^r e^{-(Λ_T - Λ_t)} | F_t], r = 0..n-1.
struct MalliavinMoments {
  std::vector<double> m;
  double t = 0.0;
  double T = 0.0;
  KernelIntegrals integrals;
};

/// Lévy-driven models only; other models raise DomainError.
KernelIntegrals kernel_integrals(const HazardModel& model, double t, double T, int max_k,
                                 const QuadratureSettings& quad = {});

MalliavinMoments malliavin_moments(const HazardModel& model, double t, double T, int n,
                                   const QuadratureSettings& quad = {});

/// Recursion on precomputed integrals; needs integrals.i_k.size() >= n-2.
std::vector<double> malliavin_recursion(const KernelIntegrals& integrals, int n);

/// e^{-Λ_t} Σ_{k<n} Σ_{j<=k} Λ_t^j/(j!(k-j)!) m_{k-j}, with Λ_t taken from the model.
SurvivalResult survival_thm2(const HazardModel& model, double t, double T, int n,
                             const QuadratureSettings& quad = {});

SurvivalResult survival_from_moments(const MalliavinMoments& moments, double lambda_t, int n);

}  // namespace dspp
