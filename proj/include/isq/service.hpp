#pragma once

#include <string>
#include <vector>

#include "isq/rng.hpp"

namespace isq {

enum class ServiceFamily { Exponential, Uniform, Deterministic };

// Service-time law G: sampler, CDF/survival, mean mu_G and the class bound
// M = max{ integral Gbar, integral 2 t Gbar }. Immutable after construction.
class ServiceModel {
 public:
  // Default-constructed model is the unit exponential law.
  ServiceModel() = default;

  // Strictly positive service-time draw.
  double sample(Rng& rng) const;

  double cdf(double x) const { return x < 0.0 ? 0.0 : 1.0 - survival(x); }
  double survival(double x) const;

  double mean() const { return mean_; }
  double class_M() const { return class_M_; }

  // Point beyond which survival(x) < 1e-12 (exact support end when finite).
  double tail_cut() const { return tail_cut_; }

  // Kinks/jumps of the survival function inside [lo, hi].
  std::vector<double> jump_points(double lo, double hi) const;

  ServiceFamily family() const { return family_; }
  const std::string& label() const { return label_; }

 private:
  friend ServiceModel make_exponential_service(double);
  friend ServiceModel make_uniform_service(double, double);
  friend ServiceModel make_deterministic_service(double);

  ServiceFamily family_ = ServiceFamily::Exponential;
  double rate_ = 1.0, lo_ = 0.0, hi_ = 1.0, d_ = 1.0;
  double mean_ = 1.0, class_M_ = 2.0, tail_cut_ = 27.631021115928547;
  std::string label_ = "exponential";
};

ServiceModel make_exponential_service(double rate);
ServiceModel make_uniform_service(double lo, double hi);
ServiceModel make_deterministic_service(double d);

}  // namespace isq
