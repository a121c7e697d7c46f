#pragma once

#include <vector>

#include "isq/rates.hpp"
#include "isq/service.hpp"

namespace isq {

// Closed-form/quadrature ground truth for the queue-length process: mean
// H(t) = integral Gbar(u) lambda(t-u) du, the covariance of counts and the
// joint log moment generating function at finitely many time points.
struct TheoryContext {
  RateModel rate;
  ServiceModel service;
  double tol = 1e-8;

  double H(double t) const;
  // H_{a,b}(t) = integral_a^b Gbar(u) lambda(t-u) du (b may be +infinity).
  double H_ab(double a, double b, double t) const;
  double cov(double t1, double t2) const;
  double joint_log_mgf(const std::vector<double>& ts, const std::vector<double>& thetas) const;
};

}  // namespace isq
