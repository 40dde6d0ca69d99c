#include <cmath>

#include "doctest.h"
#include "dspp/errors.hpp"
#include "dspp/malliavin.hpp"
#include "dspp/mc_oracle.hpp"
#include "dspp/survival.hpp"

using namespace dspp;

namespace {

double poisson_cdf(double lambda, int n) {
  double term = std::exp(-lambda), sum = term;
  for (int j = 1; j < n; ++j) sum += (term *= lambda / j);
  return sum;
}

LevyKernelModel constant_hazard(double level) {
  LevyKernelModel m;
  m.sigma = [](double, double) { return 0.0; };
  m.levy_density = TemperedStableDensity{1.0, 1.0, 0.5};
  m.lambda_t = level;
  m.label = "zero";
  return m;
}

// Catalogue members with a.s. non-negative hazard. The compensated Levy
// configurations carry Λ_t above the compensator C Γ(1-Y) M^{Y-1} ∫σ.
std::vector<HazardModel> nonnegative_models() {
  return {CirModel{2.0, 1.0, 0.5, 1.0}, GammaOuModel{1.5, 2.0, 3.0, 0.4}, IgOuModel{1.5, 2.0, 3.0, 0.4},
          CmyModel{1.0, 2.0, 0.5, TimeKernel::constant(1.0), 1.3},
          make_levy_kernel(TimeKernel::exponential(1.0, 0.7), 1.0, {0.5, 1.0, 0.5}, 1.0)};
}

}  // namespace

TEST_CASE("n = 1 is the conditional Laplace transform at 1") {
  for (const auto& m : nonnegative_models()) {
    const auto r = survival_thm1(m, 0.0, 1.0, 1);
    const double psi_i = cgf(m, {Complex{0, 1}, 0.0, 1.0}).real();
    CHECK(r.probability == doctest::Approx(std::exp(psi_i)).epsilon(1e-12));
    CHECK(r.terms.size() == 1);
    CHECK(r.route == Route::bell);
  }
}

TEST_CASE("constant hazard reproduces the Poisson tail") {
  for (double level : {0.0, 0.4, 2.5}) {
    for (int n = 1; n <= 8; ++n) {
      const auto r = survival_thm1(constant_hazard(level), 0.0, 1.0, n);
      CHECK(r.probability == doctest::Approx(poisson_cdf(level, n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("CMY worked example: both analytic routes and Monte Carlo") {
  const CmyModel cmy{1.0, 2.0, 0.5, TimeKernel::constant(1.0), 0.0};
  const auto a = survival_thm1(cmy, 0.0, 1.0, 3);
  const auto b = survival_thm2(cmy, 0.0, 1.0, 3);
  CHECK(std::abs(a.probability / b.probability - 1.0) < 1e-8);
  McConfig mc;
  mc.n_paths = 1'000'000;
  mc.seed = 99;
  const auto e = mc_survival(cmy, 0.0, 1.0, 3, mc);
  CHECK(std::abs(e.mean - a.probability) < 3.0 * e.std_error);
}

TEST_CASE("result structure") {
  for (const auto& m : nonnegative_models()) {
    const auto r = survival_thm1(m, 0.0, 1.0, 6);
    double sum = 0.0;
    for (double v : r.terms) sum += v;
    CHECK(r.probability == doctest::Approx(sum).epsilon(1e-12));
    CHECK(r.terms[0] == doctest::Approx(std::exp(cgf_derivatives_at_i(m, 0.0, 1.0, 0).c0)).epsilon(1e-12));
    for (double v : r.terms) CHECK(v >= 0.0);
  }
}

TEST_CASE("monotone in n, and in T for rate models") {
  for (const auto& m : nonnegative_models()) {
    CAPTURE(describe(m));
    double prev_T[9] = {2, 2, 2, 2, 2, 2, 2, 2, 2};
    for (double T : {0.25, 0.5, 1.0, 2.0}) {
      const auto d = cgf_derivatives_at_i(m, 0.0, T, 7);
      double prev = -1.0;
      for (int n = 1; n <= 8; ++n) {
        const double p = survival_from_derivatives(d, n).probability;
        CHECK(p >= prev - 1e-10);
        prev = p;
        if (!is_levy_driven(m)) {
          CHECK(p <= prev_T[n] + 1e-10);
          prev_T[n] = p;
        }
      }
    }
  }
}

TEST_CASE("degenerate horizon") {
  for (const auto& m : nonnegative_models()) {
    const double level = accumulated_hazard(m);
    for (int n = 1; n <= 6; ++n) {
      const double p = survival_thm1(m, 0.7, 0.7, n).probability;
      CHECK(std::abs(p - poisson_cdf(level, n)) <= 1e-12 * poisson_cdf(level, n));
    }
  }
}

TEST_CASE("out-of-range probabilities are flagged, not clamped") {
  const CmyModel cmy{1.0, 2.0, 0.5, TimeKernel::constant(1.0), 0.0};
  const auto r = survival_thm1(cmy, 0.0, 1.0, 1);
  CHECK(r.probability > 1.0);
  REQUIRE(r.diagnostics.warnings.size() == 1);
  CHECK(r.diagnostics.warnings[0] == "probability_out_of_range");
}

TEST_CASE("jump index bounds") {
  CHECK_THROWS_AS(survival_thm1(CirModel{}, 0.0, 1.0, 0), DomainError);
  CHECK_THROWS_AS(survival_thm1(CirModel{}, 0.0, 1.0, 33), DomainError);
  CHECK_NOTHROW(survival_thm1(CmyModel{}, 0.0, 1.0, 32));
}

TEST_CASE("route names") {
  for (Route r : {Route::bell, Route::malliavin, Route::monte_carlo}) CHECK(parse_route(route_name(r)) == r);
  CHECK_THROWS_AS(parse_route("fourier"), ConfigurationError);
}
