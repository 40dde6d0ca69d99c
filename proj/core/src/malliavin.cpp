#include "dspp/malliavin.hpp"

#include <cmath>
#include <functional>

#include "dspp/errors.hpp"

namespace dspp {

namespace {

KernelIntegrals cmy_integrals(const CmyModel& m, double t, double T, int max_k, const QuadratureSettings& quad) {
  const auto& breaks = m.sigma.breaks();
  auto over_time = [&](const std::function<double(double)>& f) { return integrate_piecewise(f, t, T, breaks, quad); };
  KernelIntegrals out;
  if (m.Y == 0.0) {
    // C ∫ [σ/M - log(1 + σ/M)] ds
    out.log_m0 = m.C * over_time([&](double s) {
                   const double x = m.sigma(s) / m.M;
                   return x - std::log1p(x);
                 });
  } else {
    const double g_neg = gamma_fn(-m.Y);
    const double g_one = gamma_fn(1.0 - m.Y);
    const double my = std::pow(m.M, m.Y);
    out.log_m0 = m.C * over_time([&](double s) {
                   const double sig = m.sigma(s);
                   const double power_diff = my * std::expm1(m.Y * std::log1p(sig / m.M));
                   return g_neg * power_diff + sig * g_one * my / m.M;
                 });
  }
  const double g1 = gamma_fn(1.0 - m.Y);
  const double my1 = std::pow(m.M, m.Y - 1.0);
  out.i_a = m.C * g1 * over_time([&](double s) {
              const double sig = m.sigma(s);
              return sig * my1 * std::expm1((m.Y - 1.0) * std::log1p(sig / m.M));
            });
  for (int k = 1; k <= max_k; ++k) {
    const double gk = gamma_fn(k + 1.0 - m.Y);
    out.i_k.push_back(m.C * gk * over_time([&](double s) {
                        const double sig = m.sigma(s);
                        return std::pow(sig, k + 1) * std::pow(m.M + sig, m.Y - (k + 1));
                      }));
  }
  return out;
}

KernelIntegrals kernel_integrals_quadrature(const LevyKernelModel& m, double t, double T, int max_k,
                                            const QuadratureSettings& quad) {
  auto integral = [&](const std::function<double(double)>& of_sigma) {
    const std::function<double(double, double)> g = [&](double s, double z) { return of_sigma(m.sigma(s, z)); };
    return integrate_levy(g, t, T, m.levy_density, m.z_domain, quad, m.s_breaks);
  };
  KernelIntegrals out;
  out.log_m0 = integral([](double x) { return expm1_plus(x); });
  out.i_a = integral([](double x) { return std::expm1(-x) * x; });
  for (int k = 1; k <= max_k; ++k) {
    out.i_k.push_back(integral([k](double x) { return std::exp(-x) * std::pow(x, k + 1); }));
  }
  return out;
}

}  // namespace

KernelIntegrals kernel_integrals(const HazardModel& model, double t, double T, int max_k,
                                 const QuadratureSettings& quad) {
  if (!(t >= 0.0) || !(T >= t)) throw DomainError("kernel integrals require T >= t >= 0");
  validate(model);
  if (const auto* m = std::get_if<CmyModel>(&model)) return cmy_integrals(*m, t, T, max_k, quad);
  if (const auto* m = std::get_if<LevyKernelModel>(&model)) return kernel_integrals_quadrature(*m, t, T, max_k, quad);
  throw DomainError("the recursion route applies to Levy-driven hazards only (got " + model_name(model) + ")");
}

std::vector<double> malliavin_recursion(const KernelIntegrals& integrals, int n) {
  if (n < 1) throw DomainError("recursion depth must be positive");
  if (static_cast<int>(integrals.i_k.size()) < n - 2) throw DomainError("too few kernel integrals for the recursion");
  std::vector<double> m(n);
  m[0] = std::exp(integrals.log_m0);
  for (int r = 0; r + 1 < n; ++r) {
    double next = m[r] * integrals.i_a;
    for (int k = 1; k <= r; ++k) next += binomial(r, k) * m[r - k] * integrals.i_k[k - 1];
    m[r + 1] = next;
  }
  return m;
}

MalliavinMoments malliavin_moments(const HazardModel& model, double t, double T, int n,
                                   const QuadratureSettings& quad) {
  if (n < 1 || n > kMaxJumpIndex) throw DomainError("jump index n must lie in [1, 32]");
  MalliavinMoments out;
  out.t = t;
  out.T = T;
  out.integrals = kernel_integrals(model, t, T, std::max(0, n - 2), quad);
  out.m = malliavin_recursion(out.integrals, n);
  return out;
}

SurvivalResult survival_from_moments(const MalliavinMoments& moments, double lambda_t, int n) {
  if (n < 1 || static_cast<int>(moments.m.size()) < n) throw DomainError("too few moments for the jump index");
  SurvivalResult out;
  out.route = Route::malliavin;
  const double scale = std::exp(-lambda_t);
  for (int k = 0; k < n; ++k) {
    double inner = 0.0;
    double lambda_pow = 1.0;
    for (int j = 0; j <= k; ++j) {
      if (j > 0) lambda_pow *= lambda_t;
      inner += lambda_pow / (factorial(j) * factorial(k - j)) * moments.m[k - j];
    }
    out.terms.push_back(scale * inner);
  }
  for (double v : out.terms) out.probability += v;
  flag_probability_range(out);
  return out;
}

SurvivalResult survival_thm2(const HazardModel& model, double t, double T, int n, const QuadratureSettings& quad) {
  const auto moments = malliavin_moments(model, t, T, n, quad);
  return survival_from_moments(moments, accumulated_hazard(model), n);
}

}  // namespace dspp
