#include "dspp/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "dspp/errors.hpp"

namespace dspp {

void QuadratureSettings::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_subdivisions < 1) {
    throw DomainError("quadrature settings require rel_tol > 0, abs_tol > 0, max_subdivisions >= 1");
  }
}

void CauchySettings::validate() const {
  if (!(radius > 0.0) || nodes < 2 || nodes % 2 != 0) {
    throw DomainError("Cauchy settings require radius > 0 and a positive even node count");
  }
}

namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077548500207162, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class V>
struct Segment {
  double a, b;
  V value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class V>
Segment<V> gauss_kronrod_21(const std::function<V(double)>& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<V, 21> fv;
  fv[10] = f(center);
  V kronrod = fv[10] * kWgk[10];
  V gauss{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = f(center - dx);
    fv[20 - j] = f(center + dx);
    kronrod += (fv[j] + fv[20 - j]) * kWgk[j];
    if (j % 2 == 1) gauss += (fv[j] + fv[20 - j]) * kWg[j / 2];
  }
  double resabs = std::abs(fv[10]) * kWgk[10];
  for (int j = 0; j < 10; ++j) resabs += (std::abs(fv[j]) + std::abs(fv[20 - j])) * kWgk[j];
  const V mean = kronrod * 0.5;
  double resasc = std::abs(fv[10] - mean) * kWgk[10];
  for (int j = 0; j < 10; ++j) resasc += (std::abs(fv[j] - mean) + std::abs(fv[20 - j] - mean)) * kWgk[j];

  const double ah = std::abs(half);
  resabs *= ah;
  resasc *= ah;
  double err = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);

  for (const auto& v : fv) {
    if (!std::isfinite(std::abs(v))) {
      std::ostringstream os;
      os << "integrand is not finite on [" << a << ", " << b << "]";
      throw DomainError(os.str());
    }
  }
  return {a, b, kronrod * half, err};
}

template <class V>
QuadratureResult<V> adaptive(const std::function<V(double)>& f, double a, double b,
                             const QuadratureSettings& s) {
  s.validate();
  if (!(a <= b)) throw DomainError("integration bounds must satisfy a <= b");
  if (a == b) return {};

  std::priority_queue<Segment<V>> heap;
  auto first = gauss_kronrod_21(f, a, b);
  V total = first.value;
  double total_err = first.error;
  heap.push(first);
  int subdivisions = 0;

  while (total_err > std::max(s.abs_tol, s.rel_tol * std::abs(total))) {
    if (subdivisions >= s.max_subdivisions) {
      std::ostringstream os;
      os << "adaptive quadrature on [" << a << ", " << b << "] did not converge after "
         << subdivisions << " subdivisions (estimate " << std::abs(total) << ", error bound "
         << total_err << ")";
      throw ConvergenceError(os.str(), std::real(total), total_err);
    }
    const Segment<V> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      throw ConvergenceError("adaptive quadrature hit the resolution limit of double precision",
                             std::real(total), total_err);
    }
    auto left = gauss_kronrod_21(f, worst.a, mid);
    auto right = gauss_kronrod_21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;

    // Re-sum periodically so the running totals do not drift.
    if (subdivisions % 32 == 0) {
      auto copy = heap;
      total = V{};
      total_err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        copy.pop();
      }
    }
  }
  return {total, total_err, subdivisions};
}

template <class V>
V piecewise(const std::function<V(double)>& f, double a, double b, std::span<const double> breaks,
            const QuadratureSettings& s) {
  if (!(a <= b)) throw DomainError("integration bounds must satisfy a <= b");
  std::vector<double> cuts{a};
  for (double x : breaks) {
    if (x > a && x < b) cuts.push_back(x);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(b);
  V sum{};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) sum += adaptive<V>(f, cuts[i], cuts[i + 1], s).value;
  return sum;
}

template <class V>
V z_integral(const std::function<V(double)>& q, const std::function<double(double)>& nu,
             const ZDomain& domain, const QuadratureSettings& s) {
  if (!(domain.lo >= 0.0) || !(domain.hi > domain.lo)) {
    throw DomainError("jump-size domain must satisfy 0 <= lo < hi");
  }
  auto h = [&](double z) -> V { return q(z) * nu(z); };

  double hi = domain.hi;
  if (!std::isfinite(hi)) {
    const double tiny = s.abs_tol * 1e-4;
    double z = std::max(1.0, 2.0 * domain.lo);
    int quiet = 0;
    while (z < 1e12) {
      const double mag = std::abs(h(z)) * z;
      quiet = (mag < tiny) ? quiet + 1 : 0;
      if (quiet == 2) break;
      z *= 2.0;
    }
    if (z >= 1e12) throw DomainError("jump-size integrand does not decay as z -> infinity");
    hi = z;
  }

  double lower = domain.lo;
  if (domain.lo == 0.0) {
    double eps = 1e-8;
    for (;;) {
      const double at = std::abs(h(eps));
      const double below = std::abs(h(eps / 10.0));
      if (at == 0.0 && below == 0.0) break;
      const double p = (below == 0.0) ? 10.0 : std::log10(at / below);
      if (!(p > -1.0 + 1e-6)) {
        std::ostringstream os;
        os << "jump-size integral diverges on (0, " << eps << "): integrand behaves like z^" << p;
        throw DomainError(os.str());
      }
      const double bound = at * eps / (p + 1.0);
      if (bound <= 0.1 * s.abs_tol) break;
      eps /= 100.0;
      if (eps < 1e-280) {
        throw DomainError("small-jump tail bound of the jump-size integral cannot be made below abs_tol");
      }
    }
    lower = eps;
  }
  if (hi <= lower) return V{};

  const std::function<V(double)> mapped = [&](double y) -> V {
    const double z = std::exp(y);
    return h(z) * z;
  };
  return adaptive<V>(mapped, std::log(lower), std::log(hi), s).value;
}

template <class V>
V levy_integral(const std::function<V(double, double)>& g, double t, double T,
                const std::function<double(double)>& nu, const ZDomain& domain,
                const QuadratureSettings& s, std::span<const double> breaks) {
  if (!(t <= T)) throw DomainError("time bounds must satisfy t <= T");
  if (t == T) return V{};
  QuadratureSettings inner = s;
  inner.abs_tol = s.abs_tol / std::max(1.0, T - t);
  const std::function<V(double)> outer = [&](double time) -> V {
    const std::function<V(double)> q = [&](double z) -> V { return g(time, z); };
    return z_integral<V>(q, nu, domain, inner);
  };
  return piecewise<V>(outer, t, T, breaks, s);
}

}  // namespace

QuadratureResult<double> integrate_adaptive(const std::function<double(double)>& f, double a,
                                            double b, const QuadratureSettings& settings) {
  return adaptive<double>(f, a, b, settings);
}

QuadratureResult<Complex> integrate_adaptive(const std::function<Complex(double)>& f, double a,
                                             double b, const QuadratureSettings& settings) {
  return adaptive<Complex>(f, a, b, settings);
}

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadratureSettings& settings) {
  return adaptive<double>(f, a, b, settings).value;
}

Complex integrate_1d_complex(const std::function<Complex(double)>& f, double a, double b,
                             const QuadratureSettings& settings) {
  return adaptive<Complex>(f, a, b, settings).value;
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breaks, const QuadratureSettings& settings) {
  return piecewise<double>(f, a, b, breaks, settings);
}

Complex integrate_piecewise_complex(const std::function<Complex(double)>& f, double a, double b,
                                    std::span<const double> breaks, const QuadratureSettings& settings) {
  return piecewise<Complex>(f, a, b, breaks, settings);
}

double integrate_z(const std::function<double(double)>& q, const std::function<double(double)>& levy_density,
                   const ZDomain& domain, const QuadratureSettings& settings) {
  return z_integral<double>(q, levy_density, domain, settings);
}

Complex integrate_z_complex(const std::function<Complex(double)>& q,
                            const std::function<double(double)>& levy_density, const ZDomain& domain,
                            const QuadratureSettings& settings) {
  return z_integral<Complex>(q, levy_density, domain, settings);
}

double integrate_levy(const std::function<double(double, double)>& g, double t, double T,
                      const std::function<double(double)>& levy_density, const ZDomain& z_domain,
                      const QuadratureSettings& settings, std::span<const double> s_breaks) {
  return levy_integral<double>(g, t, T, levy_density, z_domain, settings, s_breaks);
}

Complex integrate_levy_complex(const std::function<Complex(double, double)>& g, double t, double T,
                               const std::function<double(double)>& levy_density,
                               const ZDomain& z_domain, const QuadratureSettings& settings,
                               std::span<const double> s_breaks) {
  return levy_integral<Complex>(g, t, T, levy_density, z_domain, settings, s_breaks);
}

double gamma_fn(double x) {
  if (!std::isfinite(x)) throw DomainError("gamma_fn: argument is not finite");
  if (x <= 0.0 && x == std::floor(x)) {
    std::ostringstream os;
    os << "gamma_fn: pole at x = " << x;
    throw DomainError(os.str());
  }
  return std::tgamma(x);
}

CauchyResult cauchy_derivatives(const std::function<Complex(Complex)>& f, Complex center, int n_max,
                                const CauchySettings& settings) {
  settings.validate();
  if (n_max < 0) throw DomainError("cauchy_derivatives: n_max must be non-negative");
  if (2 * n_max >= settings.nodes) {
    throw DomainError("cauchy_derivatives: node count must exceed twice the highest derivative order");
  }
  const int m = 2 * settings.nodes;
  const double r = settings.radius;
  std::vector<Complex> values(m);
  double max_abs = 0.0;
  for (int j = 0; j < m; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / m;
    values[j] = f(center + std::polar(r, theta));
    if (!std::isfinite(values[j].real()) || !std::isfinite(values[j].imag())) {
      throw DomainError("cauchy_derivatives: function is not finite on the contour");
    }
    max_abs = std::max(max_abs, std::abs(values[j]));
  }

  CauchyResult out;
  out.derivatives.resize(n_max + 1);
  for (int k = 0; k <= n_max; ++k) {
    Complex fine{}, coarse{};
    for (int j = 0; j < m; ++j) {
      const Complex term = values[j] * std::polar(1.0, -2.0 * std::numbers::pi * k * j / m);
      fine += term;
      if (j % 2 == 0) coarse += term;
    }
    const double scale = factorial(k) / std::pow(r, k);
    fine *= scale / m;
    coarse *= scale / (m / 2);
    out.derivatives[k] = fine;
    const double denom = std::max(std::abs(fine), 1e-3 * scale * max_abs);
    const double rel = denom > 0.0 ? std::abs(fine - coarse) / denom : 0.0;
    out.max_rel_disagreement = std::max(out.max_rel_disagreement, rel);
  }
  if (out.max_rel_disagreement > 1e-6) {
    std::ostringstream os;
    os << "cauchy_derivatives: " << settings.nodes << "- and " << m
       << "-node rules disagree by " << out.max_rel_disagreement;
    throw ConvergenceError(os.str(), std::abs(out.derivatives.back()), out.max_rel_disagreement);
  }
  out.accuracy_warning = out.max_rel_disagreement > 1e-9;
  return out;
}

double factorial(int n) {
  if (n < 0) throw DomainError("factorial of a negative integer");
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double expm1_plus(double x) {
  if (std::abs(x) < 1e-2) {
    // x^2/2 - x^3/6 + ... through x^7
    double term = x * x / 2.0;
    double sum = term;
    for (int k = 3; k <= 8; ++k) {
      term *= -x / k;
      sum += term;
    }
    return sum;
  }
  return std::expm1(-x) + x;
}

Complex cexpm1_minus(Complex w) {
  if (std::abs(w) < 1.0) {
    Complex term = w * w / 2.0;
    Complex sum = term;
    for (int k = 3; k <= 30; ++k) {
      term *= w / static_cast<double>(k);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::exp(w) - 1.0 - w;
}

Complex clog1p(Complex w) {
  if (std::abs(w) < 1e-3) {
    Complex term = w;
    Complex sum = w;
    for (int k = 2; k <= 7; ++k) {
      term *= -w;
      sum += term / static_cast<double>(k);
    }
    return sum;
  }
  return std::log(1.0 + w);
}

}  // namespace dspp
