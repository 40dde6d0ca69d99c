#include <cmath>

#include "doctest.h"
#include "dspp/errors.hpp"
#include "dspp/malliavin.hpp"
#include "dspp/mc_oracle.hpp"
#include "dspp/survival.hpp"

using namespace dspp;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

LevyKernelModel zero_kernel(double level) {
  LevyKernelModel m;
  m.sigma = [](double, double) { return 0.0; };
  m.levy_density = TemperedStableDensity{1.0, 1.0, 0.5};
  m.lambda_t = level;
  m.label = "zero";
  return m;
}

}  // namespace

TEST_CASE("empty horizon and zero kernel") {
  const CmyModel cmy{1.0, 2.0, 0.5, TimeKernel::constant(1.0), 0.0};
  for (const HazardModel& m : {HazardModel{cmy}, HazardModel{as_levy_kernel(cmy)}}) {
    const auto mm = malliavin_moments(m, 0.6, 0.6, 5);
    CHECK(mm.m[0] == 1.0);
    for (int r = 1; r < 5; ++r) CHECK(mm.m[r] == 0.0);
  }
  const auto z = malliavin_moments(zero_kernel(0.0), 0.0, 1.0, 5);
  CHECK(z.m[0] == 1.0);
  for (int r = 1; r < 5; ++r) CHECK(z.m[r] == 0.0);
}

TEST_CASE("CMY worked example: closed forms against quadrature") {
  const CmyModel cmy{1.0, 2.0, 0.5, TimeKernel::constant(1.0), 0.0};
  const double m0 = std::exp(std::tgamma(0.5) / std::sqrt(2.0) + std::tgamma(-0.5) * (std::sqrt(3.0) - std::sqrt(2.0)));
  const double m1 = m0 * std::tgamma(0.5) * (1.0 / std::sqrt(3.0) - 1.0 / std::sqrt(2.0));
  const auto closed = malliavin_moments(cmy, 0.0, 1.0, 4);
  const auto quad = malliavin_moments(as_levy_kernel(cmy), 0.0, 1.0, 4);
  CHECK(rel(closed.m[0], m0) < 1e-8);
  CHECK(rel(closed.m[1], m1) < 1e-8);
  CHECK(rel(quad.m[0], m0) < 1e-8);
  CHECK(rel(quad.m[1], m1) < 1e-8);
  for (int r = 0; r < 4; ++r) CHECK(rel(quad.m[r], closed.m[r]) < 1e-8);
}

TEST_CASE("CMY Y = 0 uses the logarithmic branch") {
  const CmyModel cmy{0.7, 1.5, 0.0, TimeKernel::exponential(1.0, 0.5), 0.0};
  const auto closed = kernel_integrals(cmy, 0.0, 1.0, 3);
  const auto quad = kernel_integrals(as_levy_kernel(cmy), 0.0, 1.0, 3);
  CHECK(rel(closed.log_m0, quad.log_m0) < 1e-8);
  CHECK(rel(closed.i_a, quad.i_a) < 1e-8);
  for (int k = 0; k < 3; ++k) CHECK(rel(closed.i_k[k], quad.i_k[k]) < 1e-8);
}

TEST_CASE("moments match Monte Carlo increments") {
  const CmyModel cmy{1.0, 2.0, 0.5, TimeKernel::constant(1.0), 0.0};
  const auto mm = malliavin_moments(cmy, 0.0, 1.0, 3);
  McConfig mc;
  mc.n_paths = 1'000'000;
  mc.seed = 7;
  for (int r = 0; r < 3; ++r) {
    const auto e = mc_expectation(cmy, 0.0, 1.0, [r](double x) { return std::pow(x, r) * std::exp(-x); }, mc);
    CAPTURE(r);
    CHECK(std::abs(e.mean - mm.m[r]) < 3.0 * e.std_error);
  }
}

TEST_CASE("survival_thm2 degenerate cases") {
  const CmyModel cmy{1.0, 2.0, 0.5, TimeKernel::constant(1.0), 0.4};
  const auto one = survival_thm2(cmy, 0.0, 1.0, 1);
  CHECK(one.probability == doctest::Approx(std::exp(cgf(cmy, {Complex{0, 1}, 0.0, 1.0}).real())).epsilon(1e-12));
  CHECK(one.route == Route::malliavin);

  const CmyModel at_two{1.0, 2.0, 0.5, TimeKernel::constant(1.0), 2.0};
  const auto flat = survival_thm2(at_two, 1.0, 1.0, 3);
  CHECK(std::abs(flat.probability - 5.0 * std::exp(-2.0)) < 1e-12 * 5.0 * std::exp(-2.0));
}

TEST_CASE("survival_thm2 agrees with survival_thm1") {
  for (double lambda_t : {0.0, 0.7, 2.0}) {
    for (double Y : {-0.5, 0.0, 0.5, 0.9}) {
      const CmyModel cmy{1.0, 2.0, Y, TimeKernel::exponential(1.0, 1.0), lambda_t};
      for (int n = 1; n <= 5; ++n) {
        const double a = survival_thm1(cmy, 0.0, 1.0, n).probability;
        const double b = survival_thm2(as_levy_kernel(cmy), 0.0, 1.0, n).probability;
        CHECK(rel(b, a) < 1e-8);
      }
    }
  }
}

TEST_CASE("m_r is a signed derivative of the increment Laplace transform") {
  const CmyModel cmy{1.0, 2.0, 0.5, TimeKernel::constant(1.0), 0.0};
  auto laplace = [&](Complex eps) { return std::exp(cmy_jump_exponent(-eps, cmy.C, cmy.M, cmy.Y)); };
  const auto d = cauchy_derivatives(laplace, Complex{1.0, 0.0}, 5);
  const auto mm = malliavin_moments(cmy, 0.0, 1.0, 6);
  for (int r = 0; r <= 5; ++r) {
    const double expected = (r % 2 ? -1.0 : 1.0) * d.derivatives[r].real();
    CAPTURE(r);
    CHECK(rel(mm.m[r], expected) < 1e-7);
  }

  const auto kernel = make_levy_kernel(TimeKernel::exponential(1.2, 0.8), 1.0, {0.6, 1.5, 0.3}, 0.0);
  auto laplace_q = [&](Complex eps) {
    const std::function<Complex(double, double)> g = [&](double s, double z) {
      return cexpm1_minus(-eps * kernel.sigma(s, z));
    };
    return std::exp(integrate_levy_complex(g, 0.0, 1.0, kernel.levy_density, kernel.z_domain));
  };
  const auto dq = cauchy_derivatives(laplace_q, Complex{1.0, 0.0}, 4);
  const auto mq = malliavin_moments(kernel, 0.0, 1.0, 5);
  for (int r = 0; r <= 4; ++r) CHECK(rel(mq.m[r], (r % 2 ? -1.0 : 1.0) * dq.derivatives[r].real()) < 1e-7);
}

TEST_CASE("scaling the Levy measure scales every kernel integral") {
  const CmyModel base{0.8, 2.0, 0.5, TimeKernel::exponential(1.0, 1.0), 0.0};
  CmyModel doubled = base;
  doubled.C *= 2.0;
  const auto a = kernel_integrals(base, 0.0, 1.0, 4);
  const auto b = kernel_integrals(doubled, 0.0, 1.0, 4);
  CHECK(rel(b.log_m0, 2.0 * a.log_m0) < 1e-12);
  CHECK(rel(b.i_a, 2.0 * a.i_a) < 1e-12);
  for (int k = 0; k < 4; ++k) CHECK(rel(b.i_k[k], 2.0 * a.i_k[k]) < 1e-12);
  for (double Y : {-0.5, 0.0, 0.5, 0.9}) {
    for (double M : {1.0, 4.0}) CHECK(malliavin_moments(CmyModel{1.0, M, Y, TimeKernel::constant(1.0), 0.0}, 0.0, 2.0, 3).m[0] > 0.0);
  }
}

TEST_CASE("rate models are outside the recursion route") {
  CHECK_THROWS_AS(malliavin_moments(CirModel{}, 0.0, 1.0, 2), DomainError);
  CHECK_THROWS_AS(survival_thm2(GammaOuModel{}, 0.0, 1.0, 2), DomainError);
}
