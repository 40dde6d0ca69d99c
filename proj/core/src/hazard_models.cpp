#include "dspp/hazard_models.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "dspp/errors.hpp"

namespace dspp {

namespace {

constexpr Complex kI{0.0, 1.0};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

bool finite_all(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

// 1 - e^{-x}
double one_minus_exp(double x) { return -std::expm1(-x); }

// Square-root intensity. The log-argument is written through the even
// function cosh(γτ/2) + (ϑ/γ) sinh(γτ/2), so the sign of the square root
// drops out.
Complex cir_cgf(const CirModel& m, Complex u, double tau) {
  const double th = m.theta;
  const double s2 = m.sigma * m.sigma;
  const Complex iu = kI * u;
  const Complex gamma = std::sqrt(th * th - 2.0 * iu * s2);
  const Complex e = std::exp(-gamma * tau);
  const Complex one_minus_e = -cexpm1_minus(-gamma * tau) + gamma * tau;  // 1 - e^{-γτ}
  // log E = γτ/2 + log(((1 + e) + (ϑ/γ)(1 - e)) / 2)
  Complex log_e;
  if (std::abs(gamma) < 1e-12) {
    log_e = std::log(1.0 + th * tau / 2.0);
  } else {
    log_e = gamma * tau / 2.0 + std::log(((1.0 + e) + (th / gamma) * one_minus_e) / 2.0);
  }
  const Complex a = (2.0 * th * m.kappa / s2) * (th * tau / 2.0 - log_e);
  const Complex d = (gamma + th) * one_minus_e + 2.0 * gamma * e;
  const Complex b = 2.0 * iu * one_minus_e / d;
  return a + m.lambda_t * b;
}

Complex gamma_ou_closed(const GammaOuModel& m, Complex u, double tau) {
  const double th = m.theta;
  const double g = one_minus_exp(th * tau);
  const Complex iu = kI * u;
  const Complex drift = iu * m.lambda0 * g / th;
  // b log(b / (b - iu g/ϑ)) - iuτ
  const Complex log_term = -clog1p(-iu * g / (th * m.b));
  const Complex bracket = m.b * log_term - iu * tau;
  return drift + th * m.a / (iu - th * m.b) * bracket;
}

Complex ig_ou_closed(const IgOuModel& m, Complex u, double tau) {
  const double th = m.theta;
  const double g = one_minus_exp(th * tau);
  const Complex iu = kI * u;
  const Complex drift = iu * m.lambda0 * g / th;
  const Complex c = -2.0 * iu / (m.b * m.b * th);
  const Complex q = std::sqrt(1.0 + c * g);
  const Complex d = std::sqrt(1.0 + c);
  // (1 - q)/c = -g/(1 + q); atanh(q/d) - atanh(1/d) = atanh(d g / (1 + q - g))
  const Complex a_fn = -g / (1.0 + q) + std::atanh(d * g / (1.0 + q - g)) / d;
  return drift + (2.0 * m.a * iu / (m.b * th)) * a_fn;
}

// Lévy exponents of the background driving process per unit of its own clock.
Complex gamma_bdlp_exponent(double a, double b, Complex v) { return a * kI * v / (b - kI * v); }

Complex ig_bdlp_exponent(double a, double b, Complex v) {
  return a * kI * v / (b * std::sqrt(1.0 - 2.0 * kI * v / (b * b)));
}

Complex ou_quadrature(double theta, double lambda0, double tau, Complex u,
                      const std::function<Complex(Complex)>& exponent, const QuadratureSettings& quad) {
  const double g = one_minus_exp(theta * tau);
  const Complex drift = kI * u * lambda0 * g / theta;
  const std::function<Complex(double)> f = [&](double s) {
    return exponent(u / theta * one_minus_exp(theta * (tau - s)));
  };
  return drift + theta * integrate_1d_complex(f, 0.0, tau, quad);
}

Complex levy_kernel_cgf(const LevyKernelModel& m, Complex u, double t, double T,
                        const QuadratureSettings& quad) {
  const Complex iu = kI * u;
  const std::function<Complex(double, double)> g = [&](double s, double z) {
    return cexpm1_minus(iu * m.sigma(s, z));
  };
  return iu * m.lambda_t + integrate_levy_complex(g, t, T, m.levy_density, m.z_domain, quad, m.s_breaks);
}

Complex cmy_cgf(const CmyModel& m, Complex u, double t, double T, const QuadratureSettings& quad) {
  const Complex iu = kI * u;
  const std::function<Complex(double)> f = [&](double s) {
    return cmy_jump_exponent(iu * m.sigma(s), m.C, m.M, m.Y);
  };
  return iu * m.lambda_t + integrate_piecewise_complex(f, t, T, m.sigma.breaks(), quad);
}

// Distance from u = i to the nearest singularity of Ψ (all lie on the
// negative imaginary axis for these models).
double singularity_distance(const HazardModel& model, double t, double T) {
  const double tau = T - t;
  const double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      Overloaded{
          [&](const CirModel& m) {
            if (tau <= 0.0) return inf;
            // cosh(y) + (ϑτ/2) sinh(y)/y with γ = 2iy/τ vanishes first for y in (π/2, π).
            auto f = [&](double y) { return std::cos(y) + m.theta * tau / 2.0 * std::sin(y) / y; };
            double lo = std::numbers::pi / 2.0, hi = std::numbers::pi;
            for (int it = 0; it < 200; ++it) {
              const double mid = 0.5 * (lo + hi);
              (f(mid) > 0.0 ? lo : hi) = mid;
            }
            const double beta = 2.0 * lo / tau;
            const double w_explosion = (m.theta * m.theta + beta * beta) / (2.0 * m.sigma * m.sigma);
            return 1.0 + w_explosion;
          },
          [&](const GammaOuModel& m) {
            const double g = one_minus_exp(m.theta * tau);
            return g > 0.0 ? 1.0 + m.b * m.theta / g : inf;
          },
          [&](const IgOuModel& m) { return 1.0 + m.b * m.b * m.theta / 2.0; },
          [&](const LevyKernelModel&) { return inf; },
          [&](const CmyModel& m) {
            const double s_max = m.sigma.sup_on(t, T);
            return s_max > 0.0 ? 1.0 + m.M / s_max : inf;
          },
      },
      model);
}

CumulantDerivatives levy_kernel_derivatives(const LevyKernelModel& m, double t, double T, int order,
                                            const QuadratureSettings& quad) {
  auto integral = [&](const std::function<double(double)>& of_sigma) {
    const std::function<double(double, double)> g = [&](double s, double z) { return of_sigma(m.sigma(s, z)); };
    return integrate_levy(g, t, T, m.levy_density, m.z_domain, quad, m.s_breaks);
  };
  CumulantDerivatives out;
  out.c0 = -m.lambda_t + integral([](double x) { return expm1_plus(x); });
  if (order >= 1) out.c.push_back(m.lambda_t + integral([](double x) { return std::expm1(-x) * x; }));
  for (int k = 2; k <= order; ++k) {
    out.c.push_back(integral([k](double x) { return std::exp(-x) * std::pow(x, k); }));
  }
  return out;
}

CumulantDerivatives cmy_derivatives(const CmyModel& m, double t, double T, int order,
                                    const QuadratureSettings& quad) {
  const auto& breaks = m.sigma.breaks();
  auto time_integral = [&](const std::function<double(double)>& f) {
    return integrate_piecewise(f, t, T, breaks, quad);
  };
  CumulantDerivatives out;
  out.c0 = -m.lambda_t + time_integral([&](double s) {
             return cmy_jump_exponent(-m.sigma(s), m.C, m.M, m.Y).real();
           });
  if (order >= 1) {
    const double g1 = gamma_fn(1.0 - m.Y);
    const double my1 = std::pow(m.M, m.Y - 1.0);
    out.c.push_back(m.lambda_t + m.C * g1 * time_integral([&](double s) {
                      const double sig = m.sigma(s);
                      // (M+σ)^{Y-1} - M^{Y-1}
                      return sig * my1 * std::expm1((m.Y - 1.0) * std::log1p(sig / m.M));
                    }));
  }
  for (int k = 2; k <= order; ++k) {
    const double gk = gamma_fn(k - m.Y);
    out.c.push_back(m.C * gk * time_integral([&](double s) {
                      const double sig = m.sigma(s);
                      return std::pow(sig, k) * std::pow(m.M + sig, m.Y - k);
                    }));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// TimeKernel

TimeKernel TimeKernel::constant(double value) {
  TimeKernel k;
  k.kind_ = Kind::constant;
  k.scale_ = value;
  return k;
}

TimeKernel TimeKernel::exponential(double scale, double rate) {
  TimeKernel k;
  k.kind_ = Kind::exponential;
  k.scale_ = scale;
  k.rate_ = rate;
  return k;
}

TimeKernel TimeKernel::piecewise(std::vector<double> breaks, std::vector<double> values) {
  if (values.size() != breaks.size() + 1) {
    throw DomainError("piecewise time kernel needs exactly one more value than breakpoints");
  }
  if (!std::is_sorted(breaks.begin(), breaks.end()) ||
      std::adjacent_find(breaks.begin(), breaks.end()) != breaks.end()) {
    throw DomainError("piecewise time kernel breakpoints must be strictly increasing");
  }
  TimeKernel k;
  k.kind_ = Kind::piecewise;
  k.breaks_ = std::move(breaks);
  k.values_ = std::move(values);
  return k;
}

double TimeKernel::operator()(double s) const {
  switch (kind_) {
    case Kind::constant:
      return scale_;
    case Kind::exponential:
      return scale_ * std::exp(-rate_ * s);
    case Kind::piecewise: {
      const auto idx = std::upper_bound(breaks_.begin(), breaks_.end(), s) - breaks_.begin();
      return values_[idx];
    }
  }
  return 0.0;
}

double TimeKernel::sup_on(double a, double b) const {
  switch (kind_) {
    case Kind::constant:
      return std::abs(scale_);
    case Kind::exponential:
      return std::max(std::abs((*this)(a)), std::abs((*this)(b)));
    case Kind::piecewise: {
      double best = std::abs((*this)(a));
      for (std::size_t i = 0; i < breaks_.size(); ++i) {
        if (breaks_[i] > a && breaks_[i] < b) best = std::max(best, std::abs(values_[i + 1]));
      }
      return best;
    }
  }
  return 0.0;
}

bool TimeKernel::is_non_negative() const {
  switch (kind_) {
    case Kind::constant:
    case Kind::exponential:
      return scale_ >= 0.0;
    case Kind::piecewise:
      return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
  }
  return false;
}

bool TimeKernel::is_zero() const {
  switch (kind_) {
    case Kind::constant:
    case Kind::exponential:
      return scale_ == 0.0;
    case Kind::piecewise:
      return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
  }
  return false;
}

std::string TimeKernel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant:
      os << "const(" << fmt(scale_) << ")";
      break;
    case Kind::exponential:
      os << "exp(" << fmt(scale_) << "," << fmt(rate_) << ")";
      break;
    case Kind::piecewise:
      os << "piecewise(";
      for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i > 0) os << "|" << fmt(breaks_[i - 1]) << "|";
        os << fmt(values_[i]);
      }
      os << ")";
      break;
  }
  return os.str();
}

double TemperedStableDensity::operator()(double z) const {
  if (z <= 0.0) return 0.0;
  return C * std::exp(-M * z) * std::pow(z, -1.0 - Y);
}

// ---------------------------------------------------------------------------
// Catalogue metadata

void validate(const HazardModel& model) {
  std::visit(
      Overloaded{
          [](const CirModel& m) {
            require(finite_all({m.theta, m.kappa, m.sigma, m.lambda_t}), "CIR parameters must be finite");
            require(m.theta > 0.0 && m.kappa > 0.0, "CIR requires theta > 0 and kappa > 0");
            require(m.sigma > 0.0, "CIR requires sigma > 0");
            require(m.lambda_t >= 0.0, "CIR requires lambda_t >= 0");
            require(m.theta * m.kappa >= m.sigma * m.sigma,
                    "CIR requires theta*kappa >= sigma^2 (positivity of the hazard rate); got theta*kappa = " +
                        fmt(m.theta * m.kappa) + " < sigma^2 = " + fmt(m.sigma * m.sigma));
          },
          [](const GammaOuModel& m) {
            require(finite_all({m.theta, m.a, m.b, m.lambda0}), "Gamma-OU parameters must be finite");
            require(m.theta > 0.0 && m.a > 0.0 && m.b > 0.0, "Gamma-OU requires theta, a, b > 0");
            require(m.lambda0 >= 0.0, "Gamma-OU requires lambda0 >= 0");
          },
          [](const IgOuModel& m) {
            require(finite_all({m.theta, m.a, m.b, m.lambda0}), "IG-OU parameters must be finite");
            require(m.theta > 0.0 && m.a > 0.0 && m.b > 0.0, "IG-OU requires theta, a, b > 0");
            require(m.lambda0 >= 0.0, "IG-OU requires lambda0 >= 0");
          },
          [](const LevyKernelModel& m) {
            require(static_cast<bool>(m.sigma) && static_cast<bool>(m.levy_density),
                    "Levy-kernel model needs both a kernel and a Levy density");
            require(std::isfinite(m.lambda_t), "Levy-kernel lambda_t must be finite");
            require(m.z_domain.lo >= 0.0 && m.z_domain.hi > m.z_domain.lo,
                    "Levy-kernel z_domain must satisfy 0 <= lo < hi");
            const double lo = std::max(m.z_domain.lo, 1e-6);
            const double hi = std::isfinite(m.z_domain.hi) ? m.z_domain.hi : 1e3;
            for (int j = 0; j <= 40; ++j) {
              const double z = lo * std::pow(hi / lo, j / 40.0);
              if (z <= m.z_domain.lo || z >= m.z_domain.hi) continue;
              const double v = m.levy_density(z);
              require(std::isfinite(v) && v >= 0.0, "Levy density must be non-negative on z_domain (z = " + fmt(z) + ")");
            }
          },
          [](const CmyModel& m) {
            require(finite_all({m.C, m.M, m.Y, m.lambda_t}), "CMY parameters must be finite");
            require(m.C > 0.0 && m.M > 0.0, "CMY requires C > 0 and M > 0");
            require(m.Y < 1.0, "CMY requires Y < 1");
            require(m.sigma.is_non_negative(), "CMY time kernel must be non-negative");
          },
      },
      model);
}

std::string model_name(const HazardModel& model) {
  return std::visit(Overloaded{
                        [](const CirModel&) { return std::string("cir"); },
                        [](const GammaOuModel&) { return std::string("gamma_ou"); },
                        [](const IgOuModel&) { return std::string("ig_ou"); },
                        [](const LevyKernelModel&) { return std::string("levy_kernel"); },
                        [](const CmyModel&) { return std::string("cmy"); },
                    },
                    model);
}

std::string describe(const HazardModel& model) {
  return std::visit(
      Overloaded{
          [](const CirModel& m) {
            return "cir(theta=" + fmt(m.theta) + ",kappa=" + fmt(m.kappa) + ",sigma=" + fmt(m.sigma) +
                   ",lambda_t=" + fmt(m.lambda_t) + ")";
          },
          [](const GammaOuModel& m) {
            return "gamma_ou(theta=" + fmt(m.theta) + ",a=" + fmt(m.a) + ",b=" + fmt(m.b) +
                   ",lambda0=" + fmt(m.lambda0) + ")";
          },
          [](const IgOuModel& m) {
            return "ig_ou(theta=" + fmt(m.theta) + ",a=" + fmt(m.a) + ",b=" + fmt(m.b) +
                   ",lambda0=" + fmt(m.lambda0) + ")";
          },
          [](const LevyKernelModel& m) {
            return "levy_kernel(" + (m.label.empty() ? std::string("unlabelled") : m.label) +
                   ",z=[" + fmt(m.z_domain.lo) + "," + fmt(m.z_domain.hi) + "],lambda_t=" + fmt(m.lambda_t) + ")";
          },
          [](const CmyModel& m) {
            return "cmy(C=" + fmt(m.C) + ",M=" + fmt(m.M) + ",Y=" + fmt(m.Y) + ",sigma=" + m.sigma.describe() +
                   ",lambda_t=" + fmt(m.lambda_t) + ")";
          },
      },
      model);
}

bool is_levy_driven(const HazardModel& model) {
  return std::holds_alternative<LevyKernelModel>(model) || std::holds_alternative<CmyModel>(model);
}

double accumulated_hazard(const HazardModel& model) {
  if (const auto* m = std::get_if<LevyKernelModel>(&model)) return m->lambda_t;
  if (const auto* m = std::get_if<CmyModel>(&model)) return m->lambda_t;
  return 0.0;
}

LevyKernelModel make_levy_kernel(const TimeKernel& time, double z_power, const TemperedStableDensity& density,
                                 double lambda_t) {
  LevyKernelModel m;
  if (z_power == 1.0) {
    m.sigma = [time](double s, double z) { return time(s) * z; };
  } else if (z_power == 0.0) {
    m.sigma = [time](double s, double) { return time(s); };
  } else {
    m.sigma = [time, z_power](double s, double z) { return time(s) * std::pow(z, z_power); };
  }
  m.levy_density = density;
  m.z_domain = ZDomain{0.0, std::numeric_limits<double>::infinity()};
  m.lambda_t = lambda_t;
  m.s_breaks = time.breaks();
  m.label = "sigma=" + time.describe() + "*z^" + fmt(z_power) + ",nu=ts(" + fmt(density.C) + "," +
            fmt(density.M) + "," + fmt(density.Y) + ")";
  return m;
}

LevyKernelModel as_levy_kernel(const CmyModel& model) {
  return make_levy_kernel(model.sigma, 1.0, TemperedStableDensity{model.C, model.M, model.Y}, model.lambda_t);
}

// ---------------------------------------------------------------------------
// Cumulant generating functions

Complex cmy_jump_exponent(Complex x, double C, double M, double Y) {
  const Complex w = x / M;
  if (std::abs(w) < 0.5) {
    // C Σ_{k>=2} x^k Γ(k-Y) M^{Y-k} / k!
    Complex term = x * x / 2.0 * gamma_fn(2.0 - Y) * std::pow(M, Y - 2.0);
    Complex sum = term;
    for (int k = 2; k < 80; ++k) {
      term *= w * ((k - Y) / (k + 1.0));
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return C * sum;
  }
  if (Y == 0.0) return C * (-std::log(1.0 - w) - w);
  // Γ(-Y)[(M - x)^Y - M^Y] - x Γ(1-Y) M^{Y-1}
  const Complex power_diff = std::pow(M, Y) * (std::exp(Y * std::log(1.0 - w)) - 1.0);
  return C * (gamma_fn(-Y) * power_diff - x * gamma_fn(1.0 - Y) * std::pow(M, Y - 1.0));
}

Complex cgf(const HazardModel& model, const CgfQuery& q, const QuadratureSettings& quad) {
  if (!(q.t >= 0.0) || !(q.T >= q.t)) throw DomainError("cgf requires T >= t >= 0");
  if (!std::isfinite(q.u.real()) || !std::isfinite(q.u.imag())) throw DomainError("cgf argument is not finite");
  if (q.u == Complex{}) return {};
  const double tau = q.T - q.t;
  const Complex value = std::visit(
      Overloaded{
          [&](const CirModel& m) { return cir_cgf(m, q.u, tau); },
          [&](const GammaOuModel& m) {
            // removable singularity at iu = ϑb
            if (std::abs(kI * q.u - m.theta * m.b) < 1e-6 * m.theta * m.b) return cgf_intou_quadrature(model, q, quad);
            return gamma_ou_closed(m, q.u, tau);
          },
          [&](const IgOuModel& m) { return ig_ou_closed(m, q.u, tau); },
          [&](const LevyKernelModel& m) { return levy_kernel_cgf(m, q.u, q.t, q.T, quad); },
          [&](const CmyModel& m) { return cmy_cgf(m, q.u, q.t, q.T, quad); },
      },
      model);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw DomainError("cgf is not finite at u = (" + fmt(q.u.real()) + "," + fmt(q.u.imag()) + ") for " +
                      describe(model));
  }
  return value;
}

Complex cgf_intou_quadrature(const HazardModel& model, const CgfQuery& q, const QuadratureSettings& quad) {
  const double tau = q.T - q.t;
  if (const auto* m = std::get_if<GammaOuModel>(&model)) {
    return ou_quadrature(m->theta, m->lambda0, tau, q.u,
                         [&](Complex v) { return gamma_bdlp_exponent(m->a, m->b, v); }, quad);
  }
  if (const auto* m = std::get_if<IgOuModel>(&model)) {
    return ou_quadrature(m->theta, m->lambda0, tau, q.u,
                         [&](Complex v) { return ig_bdlp_exponent(m->a, m->b, v); }, quad);
  }
  throw DomainError("cgf_intou_quadrature applies to the Gamma-OU and IG-OU models only");
}

double analyticity_radius(const HazardModel& model, double t, double T, double cap) {
  return std::min(cap, 0.9 * singularity_distance(model, t, T));
}

void check_principal_branch(const HazardModel& model, const CgfQuery& q, const QuadratureSettings& quad) {
  constexpr int kSteps = 32;
  double prev_im = 0.0;
  for (int j = 1; j <= kSteps; ++j) {
    const Complex u = q.u * (static_cast<double>(j) / kSteps);
    const double im = cgf(model, {u, q.t, q.T}, quad).imag();
    if (std::abs(im - prev_im) > 0.5) {
      throw DomainError("cgf leaves the principal branch between 0 and u = (" + fmt(q.u.real()) + "," +
                        fmt(q.u.imag()) + ") for " + describe(model));
    }
    prev_im = im;
  }
}

CumulantDerivatives cgf_derivatives_numeric(const HazardModel& model, double t, double T, int order,
                                            const CauchySettings& cauchy, const QuadratureSettings& quad) {
  if (order < 0) throw DomainError("derivative order must be non-negative");
  if (!(t >= 0.0) || !(T >= t)) throw DomainError("cgf derivatives require T >= t >= 0");
  const std::function<Complex(Complex)> psi = [&](Complex u) { return cgf(model, {u, t, T}, quad); };

  const double dist = singularity_distance(model, t, T);
  CauchySettings settings = cauchy;
  settings.radius = std::min(cauchy.radius, 0.9 * dist);
  while (settings.nodes <= 2 * order) settings.nodes *= 2;

  if (!is_levy_driven(model)) {
    check_principal_branch(model, {kI, t, T}, quad);
    for (int j = 0; j < 4; ++j) {
      check_principal_branch(model, {kI + std::polar(settings.radius, j * std::numbers::pi / 2.0), t, T}, quad);
    }
  }

  CauchyResult res;
  try {
    res = cauchy_derivatives(psi, kI, order, settings);
  } catch (const ConvergenceError&) {
    // Roundoff dominates high orders on a small circle: widen toward the
    // singularity, compensating aliasing with more nodes.
    if (!std::isfinite(dist) || 0.5 * dist <= settings.radius) throw;
    settings.radius = 0.5 * dist;
    settings.nodes *= 2;
    res = cauchy_derivatives(psi, kI, order, settings);
  }

  CumulantDerivatives out;
  out.analytic = false;
  out.cauchy_disagreement = res.max_rel_disagreement;
  out.accuracy_warning = res.accuracy_warning;
  const Complex psi_i = psi(kI);
  out.c0 = psi_i.real();
  out.max_imag_residue = std::abs(psi_i.imag());
  Complex ik = 1.0;
  for (int k = 1; k <= order; ++k) {
    ik *= kI;
    const Complex ck = res.derivatives[k] / ik;
    out.c.push_back(ck.real());
    out.max_imag_residue = std::max(out.max_imag_residue, std::abs(ck.imag()) / std::max(1.0, std::abs(ck.real())));
  }
  if (out.max_imag_residue > 1e-8) {
    throw AccuracyError("cgf derivatives at u = i carry an imaginary residue of " + fmt(out.max_imag_residue) +
                        " (Cauchy radius too large or branch problem) for " + describe(model));
  }
  return out;
}

CumulantDerivatives cgf_derivatives_at_i(const HazardModel& model, double t, double T, int order,
                                         const CauchySettings& cauchy, const QuadratureSettings& quad) {
  if (order < 0) throw DomainError("derivative order must be non-negative");
  if (!(t >= 0.0) || !(T >= t)) throw DomainError("cgf derivatives require T >= t >= 0");
  validate(model);
  if (const auto* m = std::get_if<LevyKernelModel>(&model)) return levy_kernel_derivatives(*m, t, T, order, quad);
  if (const auto* m = std::get_if<CmyModel>(&model)) return cmy_derivatives(*m, t, T, order, quad);
  return cgf_derivatives_numeric(model, t, T, order, cauchy, quad);
}

}  // namespace dspp
