#pragma once

#include <complex>
#include <memory>
#include <optional>

#include "isq/bromwich.hpp"
#include "isq/rates.hpp"
#include "isq/sim.hpp"

namespace isq {

// Standard Gaussian smoothing kernel K and its entire transform K_hat(z) = e^{z^2/2}.
struct GaussianKernel {
  static double k(double t);
  static std::complex<double> k_hat(std::complex<double> z);
};

struct KernelSupport {
  double lo = 0.0;
  double hi = 0.0;
};

struct NumericKernelOptions {
  // Tabulation window for numeric backends; NaN selects a default
  // ([-30,30] for L, [x1 - 2 - 10h, b + 2 + 10h] for J).
  double window_lo = std::nan("");
  double window_hi = std::nan("");
  double points_per_h = 10.0;  // table step = h / points_per_h
  std::optional<BromwichConfig> bromwich;  // default: choose_config(-sigma_lambda, Left)
  bool force_numeric = false;  // skip the closed forms (testing)
};

namespace detail {
struct KernelBody;
}

// Deconvolution kernel L_h with transform L_hat(z) = K_hat(z h) / lambda_hat(-z).
// Closed forms for constant, high/low (lambda1 = 0) and linear rates; Durbin
// inversion tabulated on a grid otherwise. Immutable and cheap to copy.
class DeconvKernelL {
 public:
  double eval(double t) const;
  double integral(double a, double b) const;
  std::complex<double> laplace(std::complex<double> z) const;  // Re(z) < -sigma_lambda
  KernelSupport support() const;
  bool closed_form() const;
  double bandwidth() const { return h_; }
  const RateModel& rate() const { return rate_; }

  // Integrand t -> eval(t - x0) with its exact antiderivative.
  Weight weight(double x0) const;

 private:
  friend DeconvKernelL make_L(const RateModel&, double, const NumericKernelOptions&);
  DeconvKernelL(RateModel rate, double h) : rate_(std::move(rate)), h_(h) {}
  RateModel rate_;
  double h_;
  std::shared_ptr<const detail::KernelBody> body_;
};

DeconvKernelL make_L(const RateModel& rate, double h, const NumericKernelOptions& opts = {});

// L_hat(z) = K_hat(z h) / lambda_hat(-z); domain Re(z) < -sigma_lambda.
std::complex<double> laplace_of_L(const DeconvKernelL& kernel, std::complex<double> z);

// Mean kernel J_b with transform psi_hat(z) / lambda_hat(-z), where psi is the
// indicator of [0, b + x1] convolved with the Gaussian density shifted to x1.
class MeanKernelJ {
 public:
  double eval(double t) const;
  double integral(double a, double b) const;
  std::complex<double> laplace(std::complex<double> z) const;
  KernelSupport support() const;
  bool closed_form() const;
  double window_b() const { return b_; }
  double smoothing_h() const { return h_; }
  double shift_x1() const { return x1_; }
  const RateModel& rate() const { return rate_; }

  Weight weight() const;

 private:
  friend MeanKernelJ make_J(const RateModel&, double, double, double,
                            const NumericKernelOptions&);
  MeanKernelJ(RateModel rate, double b, double h, double x1)
      : rate_(std::move(rate)), b_(b), h_(h), x1_(x1) {}
  RateModel rate_;
  double b_, h_, x1_;
  std::shared_ptr<const detail::KernelBody> body_;
};

MeanKernelJ make_J(const RateModel& rate, double b, double h, double x1 = 0.0,
                   const NumericKernelOptions& opts = {});

}  // namespace isq
