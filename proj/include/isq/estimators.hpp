#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "isq/kernels.hpp"
#include "isq/rates.hpp"
#include "isq/sim.hpp"

namespace isq {

struct DistEstimate {
  double x0 = 0.0;
  double h = 0.0;
  double value = 0.0;     // estimate of G(x0); deliberately not clipped to [0,1]
  double variance = 0.0;  // estimated variance of the estimator
};

struct MeanEstimate {
  double b = 0.0;
  double value = 0.0;
};

// G_tilde_h(x0) = 1 - (1/n) sum_k integral_0^T L_h(t - x0) X_k(t) dt.
// The variance field is filled on the default grid when n >= 2, else 0.
DistEstimate estimate_G(const std::vector<QueuePath>& paths, const DeconvKernelL& L, double x0,
                        double T);

// mu_tilde = (1/n) sum_k integral_0^T J_b(t) X_k(t) dt. Warns on stderr when the
// kernel's effective support is not contained in [0, T].
MeanEstimate estimate_mu(const std::vector<QueuePath>& paths, const MeanKernelJ& J, double T);

// Constant-rate closed form: (1/(n lambda0)) sum_i X_i(b).
MeanEstimate estimate_mu_closed_constant(const std::vector<QueuePath>& paths, double b,
                                         double lambda0);

// High/low closed form: (1/(n lambda0)) sum_i (X_i(b-1) + X_i(b)).
MeanEstimate estimate_mu_closed_highlow(const std::vector<QueuePath>& paths, double b,
                                        double lambda0);

// Empirical-covariance variance estimate, v^2 = (Delta^2/(n-1)) L* R L, where R
// is the sample covariance of the grid samples.
double variance_estimate(const std::vector<QueuePath>& paths, const DeconvKernelL& L, double x0,
                         const Grid& grid);

// Grid used by estimate_G's variance fill: step h/4 over the kernel support
// around x0, clipped to [0, T].
Grid default_variance_grid(const DeconvKernelL& L, double x0, double T);

struct BandwidthInputs {
  double beta = 1.0;  // Hoelder smoothness of G near x0
  double A = 1.0;     // Hoelder constant
  double M = 1.0;     // class bound
  double x0 = 1.0;
  double n = 1.0;     // number of observed paths
  RateModel rate;
};

// h* = (M kappa / (A^2 lambda0 n))^{1/(2 beta + 2 gamma + 1)} with the
// kappa factor picked by the sigma_lambda branch.
double theoretical_h(const BandwidthInputs& inputs);

// Window choice b* for the mean estimator: logarithmic rule for exponentially
// growing rates, (M lambda0 n)^{1/(p+2)} for polynomially bounded ones.
double theoretical_b(const RateModel& rate, double M, double n);

struct AdaptiveConfig {
  double h_min = 0.025;
  double alpha = 0.25;
  // Number of grid steps above h_min; < 0 picks the largest i with h_i <= x0.
  int max_steps = -1;
  // kappa(n); default 0.25 * sqrt(ln n).
  std::function<double(std::size_t)> kappa;
  // Midpoint of the interval at h_{j*} instead of the running intersection.
  bool literal_last_interval = false;
};

struct AdaptiveResult {
  double h_selected = 0.0;
  DistEstimate estimate;
  bool hit_max_steps = false;  // all intervals intersected through the grid end
  std::vector<double> h_grid;
  std::vector<DistEstimate> per_bandwidth;
};

// Interval-intersection selection rule on precomputed (value, halfwidth) pairs:
// j* = max{ j : intersection of [v_i - w_i, v_i + w_i], i <= j, is nonempty }.
// Returns j* (0-based) and the selected point estimate.
struct IntervalSelection {
  std::size_t j_star = 0;
  double value = 0.0;
  bool exhausted = false;
};
IntervalSelection select_from_intervals(const std::vector<double>& values,
                                        const std::vector<double>& halfwidths,
                                        bool literal_last_interval = false);

// Bandwidth selection on the geometric grid h_i = (1+alpha)^i h_min, using
// confidence intervals of +-2 kappa v_{h_i} around each estimate.
AdaptiveResult select_bandwidth_adaptive(const std::vector<QueuePath>& paths,
                                         const std::vector<DeconvKernelL>& kernels, double x0,
                                         double T, const AdaptiveConfig& cfg);

// Convenience overload that builds the kernel grid itself.
AdaptiveResult select_bandwidth_adaptive(const std::vector<QueuePath>& paths,
                                         const RateModel& rate, double x0, double T,
                                         const AdaptiveConfig& cfg);

// The h grid implied by the config (auto max_steps resolved at x0).
std::vector<double> adaptive_h_grid(const AdaptiveConfig& cfg, double x0);

}  // namespace isq
