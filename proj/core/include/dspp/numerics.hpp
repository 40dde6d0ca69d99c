#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace dspp {

using Complex = std::complex<double>;

struct QuadratureSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_subdivisions = 200;

  void validate() const;
};

struct CauchySettings {
  double radius = 0.25;
  int nodes = 64;

  void validate() const;
};

/// Closed interval of jump sizes. `hi` may be +infinity.
struct ZDomain {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  bool operator==(const ZDomain&) const = default;
};

template <class V>
struct QuadratureResult {
  V value{};
  double error = 0.0;
  int subdivisions = 0;
};

// Adaptive bisection on a 10/21-point Gauss-Kronrod pair. Throws
// ConvergenceError when max_subdivisions is exhausted before
// err <= max(abs_tol, rel_tol*|I|).
QuadratureResult<double> integrate_adaptive(const std::function<double(double)>& f, double a,
                                            double b, const QuadratureSettings& settings);
QuadratureResult<Complex> integrate_adaptive(const std::function<Complex(double)>& f, double a,
                                             double b, const QuadratureSettings& settings);

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadratureSettings& settings = {});
Complex integrate_1d_complex(const std::function<Complex(double)>& f, double a, double b,
                             const QuadratureSettings& settings = {});

/// Integral over [a, b] split at the interior points of `breaks`.
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breaks, const QuadratureSettings& settings = {});
Complex integrate_piecewise_complex(const std::function<Complex(double)>& f, double a, double b,
                                    std::span<const double> breaks,
                                    const QuadratureSettings& settings = {});

/// ∫ q(z) ν(z) dz over `domain`.
///
/// The z-integral is taken in the logarithmic variable. An unbounded upper end
/// is truncated once the integrand is negligible. When domain.lo == 0 the
/// interval [0, eps) is dropped and bounded analytically by extrapolating the
/// local power law of |q·ν| near eps; eps starts at 1e-8 and shrinks until the
/// bound is below abs_tol. A power law that is not integrable at zero raises
/// DomainError.
double integrate_z(const std::function<double(double)>& q, const std::function<double(double)>& levy_density,
                   const ZDomain& domain, const QuadratureSettings& settings = {});
Complex integrate_z_complex(const std::function<Complex(double)>& q,
                            const std::function<double(double)>& levy_density, const ZDomain& domain,
                            const QuadratureSettings& settings = {});

/// Iterated integral ∫_t^T ∫ g(s,z) ν(dz) ds.
double integrate_levy(const std::function<double(double, double)>& g, double t, double T,
                      const std::function<double(double)>& levy_density, const ZDomain& z_domain,
                      const QuadratureSettings& settings = {}, std::span<const double> s_breaks = {});
Complex integrate_levy_complex(const std::function<Complex(double, double)>& g, double t, double T,
                               const std::function<double(double)>& levy_density,
                               const ZDomain& z_domain, const QuadratureSettings& settings = {},
                               std::span<const double> s_breaks = {});

/// Euler Gamma function. Raises DomainError at the poles 0, -1, -2, ...
double gamma_fn(double x);

struct CauchyResult {
  std::vector<Complex> derivatives;  // f^(k)(center), k = 0..n_max
  double max_rel_disagreement = 0.0;  // between `nodes` and 2*`nodes` rules
  bool accuracy_warning = false;      // disagreement above 1e-9
};

/// Derivatives of an analytic function by the trapezoid rule applied to the
/// Cauchy integral on a circle of `settings.radius` around `center`. The
/// returned values use 2*nodes points; the `nodes`-point rule is the check.
/// Disagreement above 1e-6 raises ConvergenceError.
CauchyResult cauchy_derivatives(const std::function<Complex(Complex)>& f, Complex center, int n_max,
                                const CauchySettings& settings = {});

double factorial(int n);
double binomial(int n, int k);

// e^{-x} - 1 + x without cancellation for small x.
double expm1_plus(double x);
// e^{w} - 1 - w without cancellation for small |w|.
Complex cexpm1_minus(Complex w);
Complex clog1p(Complex w);

}  // namespace dspp
