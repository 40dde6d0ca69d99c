#include <cmath>
#include <cstring>

#include "doctest.h"
#include "dspp/errors.hpp"
#include "dspp/levy_sampler.hpp"
#include "dspp/mc_oracle.hpp"
#include "dspp/survival.hpp"

using namespace dspp;

namespace {

McConfig small(std::uint64_t seed, std::int64_t paths = 200'000) {
  McConfig c;
  c.n_paths = paths;
  c.seed = seed;
  return c;
}

std::vector<HazardModel> models() {
  return {CirModel{2.0, 1.0, 0.5, 1.0}, GammaOuModel{1.5, 2.0, 3.0, 0.4}, IgOuModel{1.5, 2.0, 3.0, 0.4},
          CmyModel{1.0, 2.0, 0.5, TimeKernel::constant(1.0), 1.3},
          make_levy_kernel(TimeKernel::exponential(1.0, 0.7), 1.0, {0.5, 1.0, 0.5}, 1.0)};
}

}  // namespace

TEST_CASE("Philox streams are reproducible and distinct") {
  PathRng a(1, 5), b(1, 5), c(1, 6), d(2, 5), e(1, 5, 1);
  const auto first = a();
  CHECK(first == b());
  CHECK(first != c());
  CHECK(first != d());
  CHECK(first != e());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("zero kernel gives zero increments") {
  LevyKernelModel m;
  m.sigma = [](double, double) { return 0.0; };
  m.levy_density = TemperedStableDensity{1.0, 1.0, 0.5};
  m.label = "zero";
  const auto xs = simulate_lambda(m, 0.0, 1.0, small(1, 1000));
  for (double x : xs) CHECK(x == 0.0);
}

TEST_CASE("estimates are bit-identical across runs and worker counts") {
  for (const auto& m : models()) {
    McConfig a = small(42, 20'000);
    McConfig b = a;
    a.workers = 1;
    b.workers = 3;
    const auto x = mc_survival(m, 0.0, 1.0, 2, a);
    const auto y = mc_survival(m, 0.0, 1.0, 2, b);
    const auto z = mc_survival(m, 0.0, 1.0, 2, a);
    CHECK(std::memcmp(&x.mean, &y.mean, sizeof(double)) == 0);
    CHECK(std::memcmp(&x.std_error, &y.std_error, sizeof(double)) == 0);
    CHECK(std::memcmp(&x.mean, &z.mean, sizeof(double)) == 0);
    CHECK(x.model_digest == z.model_digest);
    CHECK(x.n_paths == 20'000);
    CHECK(x.seed == 42);
  }
  CHECK(model_digest(CirModel{}, 0, 1, small(1)) != model_digest(CirModel{}, 0, 1, small(2)));
}

TEST_CASE("Gamma-OU with high activity: sample mean against the first cumulant") {
  const GammaOuModel m{1.2, 50.0, 4.0, 0.3};
  const auto d = cauchy_derivatives([&](Complex u) { return cgf(m, {u, 0.0, 1.0}); }, Complex{}, 1);
  const double mean = (Complex{0, -1} * d.derivatives[1]).real();
  const auto e = mc_expectation(m, 0.0, 1.0, [](double x) { return x; }, small(3));
  CHECK(std::abs(e.mean - mean) < 3.0 * e.std_error);
}

TEST_CASE("CMY Laplace transform of the increment matches m0") {
  const CmyModel cmy{1.0, 2.0, 0.5, TimeKernel::constant(1.0), 0.0};
  const double m0 = std::exp(std::tgamma(0.5) / std::sqrt(2.0) + std::tgamma(-0.5) * (std::sqrt(3.0) - std::sqrt(2.0)));
  const auto e = mc_expectation(cmy, 0.0, 1.0, [](double x) { return std::exp(-x); }, small(4, 1'000'000));
  CHECK(std::abs(e.mean - m0) < 3.0 * e.std_error);
}

TEST_CASE("degenerate horizon is exact") {
  const CmyModel cmy{1.0, 2.0, 0.5, TimeKernel::constant(1.0), 1.5};
  const auto e = mc_survival(cmy, 0.5, 0.5, 3, small(5, 1000));
  CHECK(e.mean == doctest::Approx(std::exp(-1.5) * (1 + 1.5 + 1.125)).epsilon(1e-14));
  CHECK(e.std_error == 0.0);
  const auto c = mc_survival(CirModel{2.0, 1.0, 0.5, 1.0}, 1.0, 1.0, 2, small(5, 1000));
  CHECK(c.mean == 1.0);
}

TEST_CASE("n = 1 brackets the analytic Laplace transform") {
  for (const auto& m : models()) {
    CAPTURE(describe(m));
    const auto e = mc_survival(m, 0.0, 1.0, 1, small(6));
    const double exact = survival_thm1(m, 0.0, 1.0, 1).probability;
    CHECK(std::abs(e.mean - exact) < 3.0 * e.std_error + e.bias_allowance);
  }
}

TEST_CASE("threshold crossing for a deterministic linear hazard") {
  // negligible jump activity and ϑ -> 0 leave Λ_s = s
  const GammaOuModel linear{1e-9, 1e-9, 1.0, 1.0};
  const auto one = mc_jump_times(linear, 1.0, 1, small(8));
  CHECK(std::abs(one.mean - std::exp(-1.0)) < 3.0 * one.std_error);
  const auto two = mc_jump_times(linear, 1.0, 2, small(8));
  CHECK(std::abs(two.mean - 2.0 * std::exp(-1.0)) < 3.0 * two.std_error);
}

TEST_CASE("threshold and conditional estimators agree, with the ordering of their variances") {
  for (const auto& m : models()) {
    CAPTURE(describe(m));
    const auto cfg = small(9);
    const auto s = mc_survival(m, 0.0, 1.0, 2, cfg);
    const auto j = mc_jump_times(m, 1.0, 2, cfg);
    CHECK(std::abs(s.mean - j.mean) < 3.0 * std::hypot(s.std_error, j.std_error));
    CHECK(s.std_error <= j.std_error);
  }
}

TEST_CASE("empirical characteristic function matches the cgf") {
  const std::vector<Complex> us{{0.5, 0}, {-1.5, 0}, {0, 0.5}, {0, 1.0}};
  for (const auto& m : models()) {
    CAPTURE(describe(m));
    const auto est = mc_characteristic_function(m, 0.0, 1.0, us, small(10));
    for (const auto& e : est) {
      const Complex exact = std::exp(cgf(m, {e.u, 0.0, 1.0}) - Complex{0, 1} * e.u * accumulated_hazard(m));
      CAPTURE(e.u);
      CHECK(std::abs(e.value.real() - exact.real()) <= 4.0 * e.std_error_re + 1e-12);
      CHECK(std::abs(e.value.imag() - exact.imag()) <= 4.0 * e.std_error_im + 1e-12);
    }
  }
}

TEST_CASE("jump sampler cutoffs") {
  LevySamplerSpec s;
  s.sigma = [](double, double z) { return z; };
  s.density = TemperedStableDensity{1.0, 2.0, 0.9};
  s.t = 0.0;
  s.T = 1.0;
  const LevyJumpSampler auto_eps(s);
  CHECK(auto_eps.epsilon() > 0.0);
  CHECK(auto_eps.third_cumulant_bound() / 6.0 <= LevyJumpSampler::kThirdCumulantTolerance);
  CHECK(auto_eps.small_jump_variance() > 0.0);
  s.eps = 0.5;
  CHECK_THROWS_AS(LevyJumpSampler{s}, ConfigurationError);

  // uncompensated first moment
  LevySamplerSpec u;
  u.sigma = [](double, double z) { return 2.0 * z; };
  u.density = TemperedStableDensity{0.5, 3.0, 0.5};
  u.t = 0.0;
  u.T = 2.0;
  u.compensated = false;
  const LevyJumpSampler sampler(u);
  double sum = 0.0, sq = 0.0;
  const int n = 200'000;
  for (int p = 0; p < n; ++p) {
    PathRng rng(11, p);
    const double x = sampler.sample(rng);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n, se = std::sqrt((sq / n - mean * mean) / n);
  const double exact = 2.0 * 2.0 * 0.5 * std::tgamma(0.5) / std::sqrt(3.0);
  CHECK(std::abs(mean - exact) < 3.0 * se);
}

TEST_CASE("configuration validation") {
  McConfig c;
  c.n_paths = 99;
  CHECK_THROWS_AS(c.validate(), ConfigurationError);
  c = {};
  c.time_step = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigurationError);
  c = {};
  c.jump_trunc_eps = 0.5;
  c.n_paths = 100;
  CHECK_THROWS_AS(mc_survival(CmyModel{1.0, 2.0, 0.9, TimeKernel::constant(1.0), 0.0}, 0.0, 1.0, 1, c),
                  ConfigurationError);
  CHECK(discretization_allowance(CirModel{2.0, 1.0, 0.5, 1.0}, 0.0, 1.0, McConfig{}) == doctest::Approx(4e-3));
  CHECK(discretization_allowance(GammaOuModel{}, 0.0, 1.0, McConfig{}) == 0.0);
}
