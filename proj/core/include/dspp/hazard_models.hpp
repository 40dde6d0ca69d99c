#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "dspp/numerics.hpp"

namespace dspp {

/// Deterministic time weight s -> σ(s): a constant, scale·e^{-rate·s}, or a
/// right-continuous piecewise-constant table.
class TimeKernel {
 public:
  enum class Kind { constant, exponential, piecewise };

  TimeKernel() = default;
  static TimeKernel constant(double value);
  static TimeKernel exponential(double scale, double rate);
  /// values[0] applies before breaks[0], values[i] on [breaks[i-1], breaks[i]).
  static TimeKernel piecewise(std::vector<double> breaks, std::vector<double> values);

  double operator()(double s) const;

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }
  double rate() const { return rate_; }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }

  double sup_on(double a, double b) const;
  bool is_non_negative() const;
  bool is_zero() const;
  std::string describe() const;

  bool operator==(const TimeKernel&) const = default;

 private:
  Kind kind_ = Kind::constant;
  double scale_ = 0.0;
  double rate_ = 0.0;
  std::vector<double> breaks_;
  std::vector<double> values_;
};

/// ν(z) = C e^{-Mz} z^{-1-Y} on z > 0 (one-sided tempered stable / CMY).
struct TemperedStableDensity {
  double C = 1.0;
  double M = 1.0;
  double Y = 0.0;

  double operator()(double z) const;
  bool operator==(const TemperedStableDensity&) const = default;
};

/// Square-root hazard rate dλ = ϑ(κ-λ)dt + σ√λ dW, hazard Λ = ∫λ ds.
struct CirModel {
  double theta = 1.0;     // mean-reversion speed ϑ
  double kappa = 1.0;     // long-run level κ
  double sigma = 0.5;     // volatility σ
  double lambda_t = 1.0;  // current rate λ_t

  bool operator==(const CirModel&) const = default;
};

/// Integrated Gamma(a,b)-OU hazard. lambda0 is the rate at the conditioning time.
struct GammaOuModel {
  double theta = 1.0;
  double a = 1.0;
  double b = 1.0;
  double lambda0 = 0.0;

  bool operator==(const GammaOuModel&) const = default;
};

/// Integrated IG(a,b)-OU hazard.
struct IgOuModel {
  double theta = 1.0;
  double a = 1.0;
  double b = 1.0;
  double lambda0 = 0.0;

  bool operator==(const IgOuModel&) const = default;
};

/// Λ_t = ∫∫ σ(s,z) Ñ(ds,dz) for a deterministic kernel and a time-homogeneous
/// Lévy density on positive jump sizes. lambda_t is the current level Λ_t.
struct LevyKernelModel {
  std::function<double(double, double)> sigma;
  std::function<double(double)> levy_density;
  ZDomain z_domain;
  double lambda_t = 0.0;
  std::vector<double> s_breaks;  // discontinuities of sigma in s
  std::string label;             // identifies the kernel/density pair in digests
};

/// Λ_t = ∫ σ(s) dL^{CMY}_s in the compensated convention.
struct CmyModel {
  double C = 1.0;
  double M = 1.0;
  double Y = 0.0;
  TimeKernel sigma = TimeKernel::constant(1.0);
  double lambda_t = 0.0;

  bool operator==(const CmyModel&) const = default;
};

using HazardModel = std::variant<CirModel, GammaOuModel, IgOuModel, LevyKernelModel, CmyModel>;

/// Throws DomainError naming the first violated invariant.
void validate(const HazardModel& model);

std::string model_name(const HazardModel& model);
std::string describe(const HazardModel& model);

/// True for the Lévy-driven forms, on which the recursion route applies.
bool is_levy_driven(const HazardModel& model);

/// Hazard level already accumulated at the conditioning time: Λ_t for the
/// Lévy-driven forms, 0 for the rate models (whose cgf is that of Λ_T - Λ_t).
double accumulated_hazard(const HazardModel& model);

/// σ(s,z) = time(s)·z^z_power with ν tempered stable on (0, ∞).
LevyKernelModel make_levy_kernel(const TimeKernel& time, double z_power,
                                 const TemperedStableDensity& density, double lambda_t);
LevyKernelModel as_levy_kernel(const CmyModel& model);

struct CgfQuery {
  Complex u;
  double t = 0.0;
  double T = 0.0;
};

/// Ψ(u; t, T) = log E[e^{iuΛ_T} | F_t].
Complex cgf(const HazardModel& model, const CgfQuery& q, const QuadratureSettings& quad = {});

/// Rate-model cgf evaluated from the generic OU formula
/// iuλ₀(1-e^{-ϑτ})/ϑ + ϑ∫_0^τ k_L(u(1-e^{-ϑ(τ-s)})/ϑ) ds by quadrature.
Complex cgf_intou_quadrature(const HazardModel& model, const CgfQuery& q,
                             const QuadratureSettings& quad = {});

/// ∫(e^{xz} - 1 - xz) ν(dz) for the tempered-stable density, Re x < M.
Complex cmy_jump_exponent(Complex x, double C, double M, double Y);

/// Radius of a disk around u = i on which Ψ is analytic, capped at `cap`.
double analyticity_radius(const HazardModel& model, double t, double T, double cap = 0.25);

/// Samples Ψ along the segment 0 -> u and rejects jumps in Im Ψ above 0.5.
void check_principal_branch(const HazardModel& model, const CgfQuery& q,
                            const QuadratureSettings& quad = {});

struct CumulantDerivatives {
  double c0 = 0.0;        // Ψ(i)
  std::vector<double> c;  // c[k-1] = Ψ^(k)(i) / i^k, k = 1..order
  bool analytic = true;   // false when taken from the Cauchy-circle route
  double cauchy_disagreement = 0.0;
  double max_imag_residue = 0.0;
  bool accuracy_warning = false;

  int order() const { return static_cast<int>(c.size()); }
};

/// c_0..c_order at u = i. Lévy-driven models use the closed differentiated
/// forms; the rate models differentiate Ψ on a circle.
CumulantDerivatives cgf_derivatives_at_i(const HazardModel& model, double t, double T, int order,
                                         const CauchySettings& cauchy = {},
                                         const QuadratureSettings& quad = {});

/// Cauchy-circle route for any model, regardless of the analytic forms.
CumulantDerivatives cgf_derivatives_numeric(const HazardModel& model, double t, double T, int order,
                                            const CauchySettings& cauchy = {},
                                            const QuadratureSettings& quad = {});

}  // namespace dspp
