#include "isq/bromwich.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace isq {

namespace {

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

void check_finite(std::complex<double> v, int k) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw std::runtime_error("bromwich: transform returned non-finite value at k = " +
                             std::to_string(k));
}

}  // namespace

BromwichConfig choose_config(double strip_edge, StripSide side) {
  double c = side == StripSide::Left ? strip_edge - 1.0 : strip_edge + 1.0;
  if (std::abs(c) < 0.25) c = side == StripSide::Left ? -0.25 : 0.25;
  BromwichConfig cfg;
  cfg.c = c;
  cfg.T_tilde = 30.0 / std::abs(c);
  cfg.n_max = 20000;
  return cfg;
}

double invert(const TransformFn& F, double t, const BromwichConfig& cfg) {
  if (cfg.n_max < 1) throw std::invalid_argument("bromwich: n_max must be >= 1");
  const double w = std::numbers::pi / cfg.T_tilde;
  const std::complex<double> f0 = F({cfg.c, 0.0});
  check_finite(f0, 0);
  KahanSum cos_sum, sin_sum;
  cos_sum.add(0.5 * f0.real());
  sin_sum.add(0.0);  // k = 0 term of the sine series vanishes
  for (int k = 1; k <= cfg.n_max; ++k) {
    const std::complex<double> fk = F({cfg.c, k * w});
    check_finite(fk, k);
    cos_sum.add(fk.real() * std::cos(k * w * t));
    sin_sum.add(fk.imag() * std::sin(k * w * t));
  }
  return std::exp(cfg.c * t) / cfg.T_tilde * (cos_sum.sum - sin_sum.sum);
}

std::vector<double> invert_grid(const TransformFn& F, const std::vector<double>& ts,
                                const BromwichConfig& cfg) {
  if (cfg.n_max < 1) throw std::invalid_argument("bromwich: n_max must be >= 1");
  const double w = std::numbers::pi / cfg.T_tilde;
  std::vector<double> re(cfg.n_max + 1), im(cfg.n_max + 1);
  int k_eff = 0;
  for (int k = 0; k <= cfg.n_max; ++k) {
    const std::complex<double> fk = F({cfg.c, k * w});
    check_finite(fk, k);
    re[k] = fk.real();
    im[k] = fk.imag();
    if (std::abs(re[k]) > 1e-280 || std::abs(im[k]) > 1e-280) k_eff = k;
  }
  // Terms beyond k_eff are below 1e-280 and cannot move a double-precision sum.

  std::vector<double> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    const double c1 = std::cos(w * t);
    const double s1 = std::sin(w * t);
    double ck = 1.0, sk = 0.0;  // cos/sin of k*w*t, advanced by angle addition
    KahanSum cos_sum, sin_sum;
    cos_sum.add(0.5 * re[0]);
    for (int k = 1; k <= k_eff; ++k) {
      const double cn = ck * c1 - sk * s1;
      const double sn = sk * c1 + ck * s1;
      ck = cn;
      sk = sn;
      cos_sum.add(re[k] * ck);
      sin_sum.add(im[k] * sk);
    }
    out[i] = std::exp(cfg.c * t) / cfg.T_tilde * (cos_sum.sum - sin_sum.sum);
  }
  return out;
}

}  // namespace isq
