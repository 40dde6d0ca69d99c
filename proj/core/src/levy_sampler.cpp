#include "dspp/levy_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "dspp/errors.hpp"

namespace dspp {

namespace {

constexpr double kTailTolerance = 1e-12;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

double LevyJumpSampler::small_moment(double eps, int power) const {
  const double lo = spec_.z_domain.lo;
  if (eps <= lo) return 0.0;
  const std::function<double(double, double)> g = [&](double s, double z) {
    const double v = spec_.sigma(s, z);
    return power == 1 ? v : std::pow(std::abs(v), power);
  };
  return integrate_levy(g, spec_.t, spec_.T, spec_.density, ZDomain{lo, eps}, quad_);
}

LevyJumpSampler::LevyJumpSampler(LevySamplerSpec spec, const QuadratureSettings& quad)
    : spec_(std::move(spec)), quad_(quad) {
  if (!(spec_.T >= spec_.t)) throw DomainError("jump sampler requires T >= t");
  if (spec_.eps < 0.0) throw ConfigurationError("jump_trunc_eps must be non-negative");
  const double span = spec_.T - spec_.t;
  if (span == 0.0) return;
  const double lo = spec_.z_domain.lo;

  // Upper cutoff: negligible expected count and kernel mass beyond it.
  if (std::isfinite(spec_.z_domain.hi)) {
    z_max_ = spec_.z_domain.hi;
  } else {
    z_max_ = std::max(1.0, 2.0 * lo);
    for (int it = 0; it < 60; ++it) {
      const ZDomain tail{z_max_, spec_.z_domain.hi};
      const double count = span * integrate_z([](double) { return 1.0; }, spec_.density, tail, quad_);
      const std::function<double(double, double)> g = [&](double s, double z) { return std::abs(spec_.sigma(s, z)); };
      const double mass = integrate_levy(g, spec_.t, spec_.T, spec_.density, tail, quad_);
      if (count < kTailTolerance && mass < kTailTolerance) break;
      z_max_ *= 2.0;
    }
  }

  if (spec_.eps > 0.0) {
    eps_ = spec_.eps;
    small_k3_ = small_moment(eps_, 3);
    if (small_k3_ / 6.0 > kThirdCumulantTolerance) {
      throw ConfigurationError("jump_trunc_eps = " + fmt(eps_) + " leaves a small-jump third cumulant of " +
                               fmt(small_k3_) + "; choose a smaller cutoff or 0 for automatic selection");
    }
  } else {
    eps_ = std::min(0.1, z_max_);
    for (int k = 0; k < 200; ++k) {
      if (eps_ <= lo) {
        eps_ = lo;
        small_k3_ = 0.0;
        break;
      }
      small_k3_ = small_moment(eps_, 3);
      if (small_k3_ / 6.0 <= kThirdCumulantTolerance) break;
      eps_ *= 0.5;
    }
  }
  small_var_ = small_moment(eps_, 2);
  small_mean_ = small_moment(eps_, 1);

  const double start = std::max(eps_, lo);
  if (start > 0.0 && z_max_ > start) {
    log_lo_ = std::log(start);
    const double log_hi = std::log(z_max_);
    const int cells = std::max(1, static_cast<int>(std::ceil((log_hi - log_lo_) / 0.05)));
    cell_width_ = (log_hi - log_lo_) / cells;
    for (int j = 0; j < cells; ++j) {
      double peak = 0.0;
      for (int q = 0; q <= 8; ++q) {
        const double z = std::exp(log_lo_ + (j + q / 8.0) * cell_width_);
        peak = std::max(peak, z * spec_.density(z));
      }
      const double height = 1.02 * peak;
      cell_height_.push_back(height);
      total_rate_ += span * height * cell_width_;
      cell_cumulative_.push_back(total_rate_);
    }
    if (spec_.compensated) {
      const std::function<double(double, double)> g = [&](double s, double z) { return spec_.sigma(s, z); };
      compensator_ = integrate_levy(g, spec_.t, spec_.T, spec_.density, ZDomain{start, z_max_}, quad_);
    }
  }
}

double LevyJumpSampler::sample(PathRng& rng) const {
  if (spec_.T == spec_.t) return 0.0;
  double total = 0.0;
  if (small_var_ > 0.0) {
    std::normal_distribution<double> normal(0.0, std::sqrt(small_var_));
    total += normal(rng);
  }
  if (!spec_.compensated) total += small_mean_;
  if (total_rate_ > 0.0) {
    std::poisson_distribution<long long> count(total_rate_);
    const long long n = count(rng);
    for (long long i = 0; i < n; ++i) {
      const double pick = rng.uniform() * total_rate_;
      const auto j = std::min<std::size_t>(
          std::upper_bound(cell_cumulative_.begin(), cell_cumulative_.end(), pick) - cell_cumulative_.begin(),
          cell_cumulative_.size() - 1);
      const double z = std::exp(log_lo_ + (static_cast<double>(j) + rng.uniform()) * cell_width_);
      const double accept = rng.uniform() * cell_height_[j];
      const double s = spec_.t + rng.uniform() * (spec_.T - spec_.t);
      if (accept < z * spec_.density(z)) total += spec_.sigma(s, z);
    }
  }
  return total - compensator_;
}

}  // namespace dspp
