#pragma once

#include <functional>
#include <vector>

#include "dspp/numerics.hpp"
#include "dspp/rng.hpp"

namespace dspp {

struct LevySamplerSpec {
  std::function<double(double, double)> sigma;  // σ(s, z)
  std::function<double(double)> density;        // ν(z)
  ZDomain z_domain;
  double t = 0.0;
  double T = 0.0;
  bool compensated = true;
  double eps = 0.0;  // small-jump cutoff; 0 selects it automatically
};

/// Samples ∫_t^T ∫ σ(s,z) N(ds,dz) (minus its compensator when compensated).
/// Jumps below eps are replaced by a Gaussian with the same first two
/// moments; the cutoff keeps the neglected third cumulant below 6e-6.
/// Larger jumps are drawn by thinning a piecewise log-uniform envelope.
class LevyJumpSampler {
 public:
  explicit LevyJumpSampler(LevySamplerSpec spec, const QuadratureSettings& quad = {});

  double sample(PathRng& rng) const;

  double epsilon() const { return eps_; }
  double upper_cutoff() const { return z_max_; }
  double small_jump_mean() const { return small_mean_; }
  double small_jump_variance() const { return small_var_; }
  double third_cumulant_bound() const { return small_k3_; }
  double compensator() const { return compensator_; }
  double envelope_rate() const { return total_rate_; }

  static constexpr double kThirdCumulantTolerance = 1e-6;

 private:
  double small_moment(double eps, int power) const;

  LevySamplerSpec spec_;
  QuadratureSettings quad_;
  double eps_ = 0.0;
  double z_max_ = 0.0;
  double small_mean_ = 0.0;
  double small_var_ = 0.0;
  double small_k3_ = 0.0;
  double compensator_ = 0.0;
  double log_lo_ = 0.0;
  double cell_width_ = 0.05;
  std::vector<double> cell_height_;
  std::vector<double> cell_cumulative_;
  double total_rate_ = 0.0;
};

}  // namespace dspp
