#include "dspp/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "dspp/errors.hpp"
#include "dspp/levy_sampler.hpp"
#include "dspp/rng.hpp"

namespace dspp {

namespace {

constexpr std::int64_t kChunk = 4096;
constexpr std::uint32_t kHazardStream = 0;
constexpr std::uint32_t kThresholdStream = 1;

struct Welford {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const Welford& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    const double d = o.mean - mean;
    const std::int64_t total = n + o.n;
    mean += d * nb / static_cast<double>(total);
    m2 += o.m2 + d * d * na * nb / static_cast<double>(total);
    n = total;
  }

  double std_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(std::max(0.0, m2 / static_cast<double>(n - 1)) / static_cast<double>(n));
  }
};

using PathFunction = std::function<void(std::int64_t path, std::span<double> out)>;

// Chunks are reduced in index order so the result does not depend on the
// number of workers.
std::vector<Welford> run_paths(std::int64_t n_paths, int outputs, int workers, const PathFunction& f) {
  const std::int64_t chunks = (n_paths + kChunk - 1) / kChunk;
  std::vector<std::vector<Welford>> per_chunk(chunks, std::vector<Welford>(outputs));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    std::vector<double> buf(outputs);
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        const std::int64_t end = std::min(n_paths, (c + 1) * kChunk);
        for (std::int64_t p = c * kChunk; p < end; ++p) {
          f(p, buf);
          for (int k = 0; k < outputs; ++k) per_chunk[c][k].add(buf[k]);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };
  int count = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  count = static_cast<int>(std::min<std::int64_t>(count, chunks));
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < count; ++w) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<Welford> total(outputs);
  for (const auto& chunk : per_chunk)
    for (int k = 0; k < outputs; ++k) total[k].merge(chunk[k]);
  return total;
}

class IncrementSimulator {
 public:
  IncrementSimulator(const HazardModel& model, double t, double T, const McConfig& config)
      : tau_(T - t), seed_(config.seed) {
    if (!(t >= 0.0) || !(T >= t)) throw DomainError("simulation requires T >= t >= 0");
    validate(model);
    config.validate();
    std::visit([&](const auto& m) { build(m, t, T, config); }, model);
  }

  double operator()(std::int64_t path) const {
    PathRng rng(seed_, static_cast<std::uint64_t>(path), kHazardStream);
    return sample_(rng);
  }

 private:
  void build(const CirModel& m, double, double, const McConfig& config) {
    const int steps = tau_ > 0.0 ? static_cast<int>(std::ceil(tau_ / config.time_step - 1e-9)) : 0;
    const double dt = steps > 0 ? tau_ / steps : 0.0;
    sample_ = [m, steps, dt](PathRng& rng) {
      std::normal_distribution<double> normal;
      const double sq = std::sqrt(dt);
      double lam = m.lambda_t;
      double integral = 0.0;
      for (int k = 0; k < steps; ++k) {
        const double pos = std::max(lam, 0.0);
        const double next = lam + m.theta * (m.kappa - pos) * dt + m.sigma * std::sqrt(pos) * sq * normal(rng);
        integral += 0.5 * (pos + std::max(next, 0.0)) * dt;
        lam = next;
      }
      return integral;
    };
  }

  void build(const GammaOuModel& m, double, double, const McConfig&) {
    const double tau = tau_;
    const double base = m.lambda0 * -std::expm1(-m.theta * tau) / m.theta;
    sample_ = [m, tau, base](PathRng& rng) {
      std::poisson_distribution<long long> count(m.a * m.theta * tau);
      std::exponential_distribution<double> size(m.b);
      const long long n = tau > 0.0 ? count(rng) : 0;
      double total = base;
      for (long long i = 0; i < n; ++i) {
        const double s = rng.uniform() * tau;
        total += -std::expm1(-m.theta * (tau - s)) / m.theta * size(rng);
      }
      return total;
    };
  }

  void build(const IgOuModel& m, double, double, const McConfig& config) {
    const double tau = tau_;
    const double th = m.theta;
    const double base = m.lambda0 * -std::expm1(-th * tau) / th;
    // IG(a/2, b) part of the driving subordinator, run on the clock ϑs.
    const double c = m.a / (2.0 * std::sqrt(2.0 * std::numbers::pi));
    const double mm = m.b * m.b / 2.0;
    LevySamplerSpec spec;
    spec.sigma = [th, tau](double s, double z) { return z * -std::expm1(-th * (tau - s)) / th; };
    spec.density = [th, c, mm](double z) { return z > 0.0 ? th * c * std::exp(-mm * z) * std::pow(z, -1.5) : 0.0; };
    spec.t = 0.0;
    spec.T = tau;
    spec.compensated = false;
    spec.eps = config.jump_trunc_eps;
    auto subordinator = std::make_shared<LevyJumpSampler>(spec);
    // compound Poisson part: rate ϑab/2, jumps x²/b² with x standard normal
    sample_ = [m, tau, base, subordinator](PathRng& rng) {
      double total = base + subordinator->sample(rng);
      if (tau > 0.0) {
        std::poisson_distribution<long long> count(m.theta * m.a * m.b / 2.0 * tau);
        std::normal_distribution<double> normal;
        const long long n = count(rng);
        for (long long i = 0; i < n; ++i) {
          const double s = rng.uniform() * tau;
          const double x = normal(rng);
          total += -std::expm1(-m.theta * (tau - s)) / m.theta * x * x / (m.b * m.b);
        }
      }
      return total;
    };
  }

  void build_levy(LevySamplerSpec spec) {
    auto sampler = std::make_shared<LevyJumpSampler>(std::move(spec));
    sample_ = [sampler](PathRng& rng) { return sampler->sample(rng); };
  }

  void build(const LevyKernelModel& m, double t, double T, const McConfig& config) {
    LevySamplerSpec spec;
    spec.sigma = m.sigma;
    spec.density = m.levy_density;
    spec.z_domain = m.z_domain;
    spec.t = t;
    spec.T = T;
    spec.compensated = true;
    spec.eps = config.jump_trunc_eps;
    build_levy(std::move(spec));
  }

  void build(const CmyModel& m, double t, double T, const McConfig& config) {
    build(as_levy_kernel(m), t, T, config);
  }

  double tau_;
  std::uint64_t seed_;
  std::function<double(PathRng&)> sample_;
};

McEstimate to_estimate(const Welford& w, const HazardModel& model, double t, double T, const McConfig& config) {
  McEstimate e;
  e.mean = w.mean;
  e.std_error = w.std_error();
  e.n_paths = w.n;
  e.seed = config.seed;
  e.model_digest = model_digest(model, t, T, config);
  e.bias_allowance = discretization_allowance(model, t, T, config);
  return e;
}

double poisson_tail_survival(double lambda, int n) {
  // e^{-Λ} Σ_{j<n} Λ^j/j!
  double term = std::exp(-lambda);
  double sum = term;
  for (int j = 1; j < n; ++j) {
    term *= lambda / j;
    sum += term;
  }
  return sum;
}

void check_jump_index(int n) {
  if (n < 1 || n > 32) throw DomainError("jump index n must lie in [1, 32]");
}

}  // namespace

void McConfig::validate() const {
  if (n_paths < 100) throw ConfigurationError("mc.n_paths must be at least 100");
  if (!(time_step > 0.0) || !std::isfinite(time_step)) throw ConfigurationError("mc.time_step must be positive");
  if (!(jump_trunc_eps >= 0.0) || !std::isfinite(jump_trunc_eps)) {
    throw ConfigurationError("mc.jump_trunc_eps must be non-negative (0 selects it automatically)");
  }
  if (workers < 0) throw ConfigurationError("mc.workers must be non-negative");
}

std::string model_digest(const HazardModel& model, double t, double T, const McConfig& config) {
  std::ostringstream os;
  os.precision(17);
  os << describe(model) << ";t=" << t << ";T=" << T << ";dt=" << config.time_step << ";eps=" << config.jump_trunc_eps
     << ";paths=" << config.n_paths << ";seed=" << config.seed;
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double discretization_allowance(const HazardModel& model, double t, double T, const McConfig& config) {
  if (const auto* m = std::get_if<CirModel>(&model)) {
    if (T == t) return 0.0;
    return 2.0 * config.time_step * m->theta * std::max(m->kappa, m->lambda_t);
  }
  return 0.0;
}

std::vector<double> simulate_lambda(const HazardModel& model, double t, double T, const McConfig& config) {
  const IncrementSimulator sim(model, t, T, config);
  std::vector<double> out(config.n_paths);
  run_paths(config.n_paths, 1, config.workers, [&](std::int64_t p, std::span<double> o) {
    out[p] = sim(p);
    o[0] = out[p];
  });
  return out;
}

McEstimate mc_expectation(const HazardModel& model, double t, double T, const std::function<double(double)>& f,
                          const McConfig& config) {
  const IncrementSimulator sim(model, t, T, config);
  const auto w = run_paths(config.n_paths, 1, config.workers,
                           [&](std::int64_t p, std::span<double> o) { o[0] = f(sim(p)); });
  return to_estimate(w[0], model, t, T, config);
}

std::vector<McEstimate> mc_survival_curve(const HazardModel& model, double t, double T, std::span<const int> ns,
                                          const McConfig& config) {
  for (int n : ns) check_jump_index(n);
  const IncrementSimulator sim(model, t, T, config);
  const double lambda_t = accumulated_hazard(model);
  const int k = static_cast<int>(ns.size());
  const auto w = run_paths(config.n_paths, k, config.workers, [&](std::int64_t p, std::span<double> o) {
    const double lam = lambda_t + sim(p);
    for (int i = 0; i < k; ++i) o[i] = poisson_tail_survival(lam, ns[i]);
  });
  std::vector<McEstimate> out;
  for (const auto& wi : w) out.push_back(to_estimate(wi, model, t, T, config));
  return out;
}

McEstimate mc_survival(const HazardModel& model, double t, double T, int n, const McConfig& config) {
  const int ns[] = {n};
  return mc_survival_curve(model, t, T, ns, config).front();
}

McEstimate mc_jump_times(const HazardModel& model, double T, int n, const McConfig& config) {
  check_jump_index(n);
  const IncrementSimulator sim(model, 0.0, T, config);
  const double lambda_0 = accumulated_hazard(model);
  const auto w = run_paths(config.n_paths, 1, config.workers, [&](std::int64_t p, std::span<double> o) {
    PathRng rng(config.seed, static_cast<std::uint64_t>(p), kThresholdStream);
    std::exponential_distribution<double> unit;
    double threshold = 0.0;
    for (int j = 0; j < n; ++j) threshold += unit(rng);
    o[0] = (lambda_0 + sim(p) < threshold) ? 1.0 : 0.0;
  });
  return to_estimate(w[0], model, 0.0, T, config);
}

std::vector<CfEstimate> mc_characteristic_function(const HazardModel& model, double t, double T,
                                                   std::span<const Complex> us, const McConfig& config) {
  const IncrementSimulator sim(model, t, T, config);
  const int k = static_cast<int>(us.size());
  const auto w = run_paths(config.n_paths, 2 * k, config.workers, [&](std::int64_t p, std::span<double> o) {
    const double x = sim(p);
    for (int i = 0; i < k; ++i) {
      const Complex v = std::exp(Complex{0.0, 1.0} * us[i] * x);
      o[2 * i] = v.real();
      o[2 * i + 1] = v.imag();
    }
  });
  std::vector<CfEstimate> out;
  for (int i = 0; i < k; ++i) {
    out.push_back({us[i], Complex{w[2 * i].mean, w[2 * i + 1].mean}, w[2 * i].std_error(), w[2 * i + 1].std_error()});
  }
  return out;
}

}  // namespace dspp
