#include "isq/service.hpp"

#include <cmath>
#include <stdexcept>

#include "isq/quadrature.hpp"

namespace isq {

double ServiceModel::survival(double x) const {
  if (x < 0.0) return 1.0;
  switch (family_) {
    case ServiceFamily::Exponential:
      return std::exp(-rate_ * x);
    case ServiceFamily::Uniform:
      if (x < lo_) return 1.0;
      if (x >= hi_) return 0.0;
      return (hi_ - x) / (hi_ - lo_);
    case ServiceFamily::Deterministic:
      return x < d_ ? 1.0 : 0.0;
  }
  return 0.0;
}

double ServiceModel::sample(Rng& rng) const {
  switch (family_) {
    case ServiceFamily::Exponential:
      return rng.exponential(rate_);
    case ServiceFamily::Uniform: {
      double v = 0.0;
      while (v <= 0.0) v = rng.uniform(lo_, hi_);
      return v;
    }
    case ServiceFamily::Deterministic:
      return d_;
  }
  return 0.0;
}

std::vector<double> ServiceModel::jump_points(double lo, double hi) const {
  std::vector<double> pts;
  auto push = [&](double x) {
    if (x > lo && x < hi) pts.push_back(x);
  };
  push(0.0);
  switch (family_) {
    case ServiceFamily::Uniform:
      push(lo_);
      push(hi_);
      break;
    case ServiceFamily::Deterministic:
      push(d_);
      break;
    default:
      break;
  }
  return pts;
}

// class_M below is computed by adaptive quadrature truncated at tail_cut
// (where survival < 1e-12); the closed forms are asserted in tests.

ServiceModel make_exponential_service(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("make_exponential_service: rate must be > 0");
  ServiceModel m;
  m.family_ = ServiceFamily::Exponential;
  m.rate_ = rate;
  m.mean_ = 1.0 / rate;
  m.tail_cut_ = -std::log(1e-12) / rate;
  m.class_M_ = std::max(
      integrate([&](double u) { return m.survival(u); }, 0.0, m.tail_cut_, 1e-10),
      integrate([&](double u) { return 2.0 * u * m.survival(u); }, 0.0, m.tail_cut_, 1e-10));
  m.label_ = "exponential";
  return m;
}

ServiceModel make_uniform_service(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo))
    throw std::invalid_argument("make_uniform_service: need 0 <= lo < hi");
  ServiceModel m;
  m.family_ = ServiceFamily::Uniform;
  m.lo_ = lo;
  m.hi_ = hi;
  m.mean_ = 0.5 * (lo + hi);
  m.tail_cut_ = hi;
  const std::vector<double> breaks{lo};
  m.class_M_ = std::max(
      integrate_with_breaks([&](double u) { return m.survival(u); }, 0.0, hi, breaks, 1e-10),
      integrate_with_breaks([&](double u) { return 2.0 * u * m.survival(u); }, 0.0, hi, breaks,
                            1e-10));
  m.label_ = "uniform";
  return m;
}

ServiceModel make_deterministic_service(double d) {
  if (!(d > 0.0)) throw std::invalid_argument("make_deterministic_service: d must be > 0");
  ServiceModel m;
  m.family_ = ServiceFamily::Deterministic;
  m.d_ = d;
  m.mean_ = d;
  m.tail_cut_ = d;
  m.class_M_ = std::max(
      integrate([&](double u) { return m.survival(u); }, 0.0, d, 1e-10),
      integrate([&](double u) { return 2.0 * u * m.survival(u); }, 0.0, d, 1e-10));
  m.label_ = "deterministic";
  return m;
}

}  // namespace isq
