#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace isq {

// Assumption-style growth bound on the arrival rate: either
// lambda(t) <= lambda0 * exp(sigma_lambda * t) or lambda(t) <= lambda0 * (a1 + a2 t^p).
struct ExponentialGrowth {};
struct PolynomialGrowth {
  double p = 0.0;
  double a1 = 0.0;
  double a2 = 1.0;  // normalised so max(a1, a2) == 1
};
using GrowthBound = std::variant<ExponentialGrowth, PolynomialGrowth>;

enum class RateFamily { Constant, Polynomial, SinusoidalSin, SinusoidalCos, Exponential, HighLow };

// Arrival intensity lambda(t) together with its exact Laplace transform and the
// metadata used by the deconvolution kernels (abscissa sigma_lambda, ill-posedness
// index gamma, transform lower-bound constant k0 and the growth bound).
// Immutable after construction.
class RateModel {
 public:
  // Default-constructed model is the unit constant rate, lambda(t) = 1[t >= 0].
  RateModel() = default;

  // lambda(t); zero for t < 0.
  double eval(double t) const;

  // lambda_hat(z) for Re(z) > sigma_lambda; throws std::domain_error otherwise.
  std::complex<double> laplace(std::complex<double> z) const;

  // Finite upper bound of lambda over [t0, t1] (majorant for thinning).
  double sup_bound(double t0, double t1) const;

  // Jump points of lambda inside [lo, hi] (exact piecewise quadrature splits).
  std::vector<double> jump_points(double lo, double hi) const;

  double sigma_lambda() const { return sigma_lambda_; }
  double gamma() const { return gamma_; }
  double k0() const { return k0_; }
  double lambda0() const { return lambda0_; }
  const GrowthBound& growth() const { return growth_; }
  RateFamily family() const { return family_; }
  const std::string& label() const { return label_; }

  // Copy with overridden transform-bound constants; validate_assumptions
  // reports how well the replacement metadata holds.
  RateModel with_bound_constants(double gamma, double k0) const;

  // Family parameters (meaning depends on family; see factory functions).
  double shift() const { return a_; }       // Constant: support starts at a
  double power() const { return p_; }       // Polynomial: exponent p
  double amplitude() const { return b_; }   // Sinusoidal: relative amplitude b
  double theta() const { return theta_; }   // Exponential: growth rate
  double lambda1() const { return lambda1_; }  // HighLow: low rate

 private:
  friend RateModel make_constant(double, double);
  friend RateModel make_polynomial(double, double);
  friend RateModel make_sinusoidal(double, double, bool);
  friend RateModel make_exponential(double, double);
  friend RateModel make_highlow(double, double);

  RateFamily family_ = RateFamily::Constant;
  double lambda0_ = 1.0;
  double sigma_lambda_ = 0.0;
  double gamma_ = 1.0;
  double k0_ = 1.0;
  GrowthBound growth_ = PolynomialGrowth{0.0, 0.0, 1.0};
  double a_ = 0.0, p_ = 0.0, b_ = 0.0, theta_ = 0.0, lambda1_ = 0.0;
  std::string label_ = "constant";
};

// lambda(t) = lambda0 * 1[t >= a];  lambda_hat(z) = lambda0 e^{-az} / z.
RateModel make_constant(double lambda0, double a = 0.0);

// lambda(t) = lambda0 * t^p;  lambda_hat(z) = lambda0 Gamma(p+1) / z^{p+1}.
RateModel make_polynomial(double lambda0, double p);

// lambda(t) = lambda0 (1 + b sin t)  or  lambda0 (1 + b cos t).
RateModel make_sinusoidal(double lambda0, double b, bool cosine = false);

// lambda(t) = lambda0 e^{theta t};  lambda_hat(z) = lambda0 / (z - theta).
RateModel make_exponential(double lambda0, double theta);

// lambda = lambda0 on (2j, 2j+1], lambda1 on (2j+1, 2j+2].
RateModel make_highlow(double lambda0, double lambda1);

struct AssumptionViolation {
  enum class Kind { Growth, TransformLowerBound };
  Kind kind;
  double sigma = 0.0;  // transform check: line abscissa
  double omega = 0.0;  // transform check: imaginary part
  double t = 0.0;      // growth check: time
  double margin = 0.0; // bound satisfied iff margin >= 0 (up to rounding slack)
};

struct ValidationReport {
  std::vector<AssumptionViolation> violations;
  std::size_t points_checked = 0;
  bool ok() const { return violations.empty(); }
};

// Samples the growth bound on t_grid and the transform lower bound
// |lambda_hat(sigma+i omega)| >= lambda0 k0 / ((sigma-sigma_lambda)^2 + omega^2)^{gamma/2}
// on sigma_grid x omega_grid. Violations are reported, never thrown.
ValidationReport validate_assumptions(const RateModel& model,
                                      const std::vector<double>& sigma_grid,
                                      const std::vector<double>& omega_grid,
                                      const std::vector<double>& t_grid);

// Default grids: sigma in [sigma_lambda+0.1, sigma_lambda+5], omega in [-100,100],
// t in [0,50].
ValidationReport validate_assumptions(const RateModel& model);

}  // namespace isq
