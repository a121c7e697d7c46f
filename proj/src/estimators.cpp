#include "isq/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

namespace isq {

namespace {

// Integration window for sum_k X(t) L(t - x0): outside the kernel support the
// antiderivative is constant, so clipping is exact.
std::pair<double, double> clipped_window(const DeconvKernelL& L, double x0, double T) {
  const KernelSupport s = L.support();
  return {std::clamp(x0 + s.lo, 0.0, T), std::clamp(x0 + s.hi, 0.0, T)};
}

}  // namespace

DistEstimate estimate_G(const std::vector<QueuePath>& paths, const DeconvKernelL& L, double x0,
                        double T) {
  if (paths.empty()) throw std::invalid_argument("estimate_G: no paths");
  for (const auto& p : paths)
    if (p.horizon < T) throw std::invalid_argument("estimate_G: path horizon below T");

  const auto [lo, hi] = clipped_window(L, x0, T);
  const Weight w = L.weight(x0);
  double acc = 0.0;
  for (const auto& p : paths) acc += path_integral(p, w, lo, hi);

  DistEstimate est;
  est.x0 = x0;
  est.h = L.bandwidth();
  est.value = 1.0 - acc / static_cast<double>(paths.size());
  est.variance =
      paths.size() >= 2 ? variance_estimate(paths, L, x0, default_variance_grid(L, x0, T)) : 0.0;
  return est;
}

MeanEstimate estimate_mu(const std::vector<QueuePath>& paths, const MeanKernelJ& J, double T) {
  if (paths.empty()) throw std::invalid_argument("estimate_mu: no paths");
  for (const auto& p : paths)
    if (p.horizon < T) throw std::invalid_argument("estimate_mu: path horizon below T");
  const KernelSupport s = J.support();
  if (s.hi > T)
    std::cerr << "warning: mean kernel support reaches " << s.hi << " beyond T = " << T
              << "; the estimate loses the clipped mass\n";

  const Weight w = J.weight();
  const double lo = std::clamp(s.lo, 0.0, T);
  const double hi = std::clamp(s.hi, 0.0, T);
  double acc = 0.0;
  for (const auto& p : paths) acc += path_integral(p, w, lo, hi);
  return MeanEstimate{J.window_b(), acc / static_cast<double>(paths.size())};
}

MeanEstimate estimate_mu_closed_constant(const std::vector<QueuePath>& paths, double b,
                                         double lambda0) {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("estimate_mu_closed_constant: lambda0 <= 0");
  double acc = 0.0;
  for (const auto& p : paths) {
    if (b > p.horizon)
      throw std::invalid_argument("estimate_mu_closed_constant: b exceeds path horizon");
    acc += p.at(b);
  }
  const double n = paths.empty() ? 1.0 : static_cast<double>(paths.size());
  return MeanEstimate{b, acc / (n * lambda0)};
}

MeanEstimate estimate_mu_closed_highlow(const std::vector<QueuePath>& paths, double b,
                                        double lambda0) {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("estimate_mu_closed_highlow: lambda0 <= 0");
  if (b < 1.0) throw std::invalid_argument("estimate_mu_closed_highlow: need b - 1 >= 0");
  double acc = 0.0;
  for (const auto& p : paths) {
    if (b > p.horizon)
      throw std::invalid_argument("estimate_mu_closed_highlow: b exceeds path horizon");
    acc += p.at(b - 1.0) + p.at(b);
  }
  const double n = paths.empty() ? 1.0 : static_cast<double>(paths.size());
  return MeanEstimate{b, acc / (n * lambda0)};
}

double variance_estimate(const std::vector<QueuePath>& paths, const DeconvKernelL& L, double x0,
                         const Grid& grid) {
  const std::size_t n = paths.size();
  if (n < 2) throw std::invalid_argument("variance_estimate: need at least 2 replications");

  std::vector<double> weights(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) weights[i] = L.eval(grid.point(i) - x0);

  // v^2 = (Delta^2/(n-1)) L* R L with R the sample covariance matrix; with
  // s_i = <L, X_i> this is Delta^2 / (n-1)^2 * sum_i (s_i - s_bar)^2.
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<int> x = sample_on_grid(paths[i], grid);
    double s = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) s += weights[k] * x[k];
    scores[i] = s;
  }
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double s : scores) ss += (s - mean) * (s - mean);
  const double nm1 = static_cast<double>(n - 1);
  return grid.step * grid.step * ss / (nm1 * nm1);
}

Grid default_variance_grid(const DeconvKernelL& L, double x0, double T) {
  const double h = L.bandwidth();
  const KernelSupport s = L.support();
  const double lo_raw = std::min(x0 + s.lo, x0 - 10.0 * h);
  const double hi_raw = std::max(x0 + s.hi, x0 + 10.0 * h);
  const double step = h / 4.0;
  const double lo = std::max(0.0, std::floor(lo_raw / step) * step);
  const double hi = std::min(T, hi_raw);
  auto n = static_cast<std::size_t>(std::max(1.0, std::floor((hi - lo) / step)));
  return Grid(step, n, lo);
}

double theoretical_h(const BandwidthInputs& in) {
  if (!(in.beta > 0.0) || !(in.A > 0.0) || !(in.M > 0.0) || !(in.n > 0.0) || !(in.x0 > 0.0))
    throw std::invalid_argument("theoretical_h: inputs must be positive");
  const RateModel& r = in.rate;
  double kappa;
  if (r.sigma_lambda() > 0.0) {
    kappa = std::exp(2.0 * r.sigma_lambda() * in.x0) / r.sigma_lambda();
  } else {
    const auto& g = std::get<PolynomialGrowth>(r.growth());
    kappa = g.a1 + g.a2 * std::pow(in.x0, g.p);
  }
  const double expo = 1.0 / (2.0 * in.beta + 2.0 * r.gamma() + 1.0);
  return std::pow(in.M * kappa / (in.A * in.A * r.lambda0() * in.n), expo);
}

double theoretical_b(const RateModel& rate, double M, double n) {
  if (!(M > 0.0) || !(n > 0.0)) throw std::invalid_argument("theoretical_b: M, n must be > 0");
  const double mln = M * rate.lambda0() * n;
  if (std::holds_alternative<ExponentialGrowth>(rate.growth())) {
    const double sl = rate.sigma_lambda();
    const double arg1 = std::pow(sl, 1.0 - 2.0 * rate.gamma()) * mln;
    if (!(arg1 > std::numbers::e))
      throw std::invalid_argument("theoretical_b: log argument below e; n too small");
    const double arg2 = std::log(arg1) / (2.0 * sl);
    if (!(arg2 > std::numbers::e))
      throw std::invalid_argument("theoretical_b: log argument below e; n too small");
    return (std::log(arg1) - 3.0 * std::log(arg2)) / (2.0 * sl) - 0.25;
  }
  const auto& g = std::get<PolynomialGrowth>(rate.growth());
  if (!(mln >= 1.0))
    throw std::invalid_argument("theoretical_b: need M * lambda0 * n >= 1");
  return std::pow(mln, 1.0 / (g.p + 2.0));
}

IntervalSelection select_from_intervals(const std::vector<double>& values,
                                        const std::vector<double>& halfwidths,
                                        bool literal_last_interval) {
  if (values.empty() || values.size() != halfwidths.size())
    throw std::invalid_argument("select_from_intervals: bad inputs");
  double lo = values[0] - halfwidths[0];
  double hi = values[0] + halfwidths[0];
  IntervalSelection sel;
  sel.j_star = 0;
  for (std::size_t j = 1; j < values.size(); ++j) {
    const double nlo = std::max(lo, values[j] - halfwidths[j]);
    const double nhi = std::min(hi, values[j] + halfwidths[j]);
    if (nlo > nhi) break;
    lo = nlo;
    hi = nhi;
    sel.j_star = j;
  }
  sel.exhausted = (sel.j_star + 1 == values.size());
  sel.value = literal_last_interval ? values[sel.j_star] : 0.5 * (lo + hi);
  return sel;
}

std::vector<double> adaptive_h_grid(const AdaptiveConfig& cfg, double x0) {
  if (!(cfg.h_min > 0.0) || !(cfg.alpha > 0.0))
    throw std::invalid_argument("adaptive_h_grid: need h_min > 0 and alpha > 0");
  int steps = cfg.max_steps;
  if (steps < 0) {
    // Largest i with h_i <= x0, so the kernel scale never dwarfs the
    // evaluation point.
    steps = cfg.h_min >= x0
                ? 0
                : static_cast<int>(std::floor(std::log(x0 / cfg.h_min) / std::log1p(cfg.alpha)));
  }
  std::vector<double> hs(static_cast<std::size_t>(steps) + 1);
  for (std::size_t i = 0; i < hs.size(); ++i)
    hs[i] = cfg.h_min * std::pow(1.0 + cfg.alpha, static_cast<double>(i));
  return hs;
}

AdaptiveResult select_bandwidth_adaptive(const std::vector<QueuePath>& paths,
                                         const std::vector<DeconvKernelL>& kernels, double x0,
                                         double T, const AdaptiveConfig& cfg) {
  if (paths.size() < 2)
    throw std::invalid_argument("select_bandwidth_adaptive: need n >= 2 for the variance");
  if (kernels.empty()) throw std::invalid_argument("select_bandwidth_adaptive: empty kernel grid");

  const double kappa = cfg.kappa ? cfg.kappa(paths.size())
                                 : 0.25 * std::sqrt(std::log(static_cast<double>(paths.size())));

  AdaptiveResult result;
  std::vector<double> values, halfwidths;
  for (const auto& kernel : kernels) {
    DistEstimate est = estimate_G(paths, kernel, x0, T);
    values.push_back(est.value);
    halfwidths.push_back(2.0 * kappa * std::sqrt(est.variance));
    result.h_grid.push_back(kernel.bandwidth());
    result.per_bandwidth.push_back(est);
  }

  const IntervalSelection sel =
      select_from_intervals(values, halfwidths, cfg.literal_last_interval);
  if (sel.exhausted && kernels.size() > 1)
    std::cerr << "warning: adaptive bandwidth grid exhausted; all intervals intersect up to "
                 "h = "
              << result.h_grid.back() << "\n";

  result.h_selected = result.h_grid[sel.j_star];
  result.hit_max_steps = sel.exhausted;
  result.estimate = result.per_bandwidth[sel.j_star];
  result.estimate.value = sel.value;
  return result;
}

AdaptiveResult select_bandwidth_adaptive(const std::vector<QueuePath>& paths,
                                         const RateModel& rate, double x0, double T,
                                         const AdaptiveConfig& cfg) {
  std::vector<DeconvKernelL> kernels;
  NumericKernelOptions opts;
  opts.window_lo = -x0 - 1.0;
  opts.window_hi = T - x0 + 1.0;
  for (double h : adaptive_h_grid(cfg, x0)) kernels.push_back(make_L(rate, h, opts));
  return select_bandwidth_adaptive(paths, kernels, x0, T, cfg);
}

}  // namespace isq
