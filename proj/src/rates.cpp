#include "isq/rates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace isq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Largest value of sin (cos) over [lo, hi] with lo <= hi.
double max_trig(double lo, double hi, bool cosine) {
  if (hi - lo >= kTwoPi) return 1.0;
  // Peak locations: pi/2 + 2k*pi for sin, 2k*pi for cos.
  const double peak0 = cosine ? 0.0 : 0.5 * std::numbers::pi;
  const double k = std::ceil((lo - peak0) / kTwoPi);
  if (peak0 + k * kTwoPi <= hi) return 1.0;
  const double flo = cosine ? std::cos(lo) : std::sin(lo);
  const double fhi = cosine ? std::cos(hi) : std::sin(hi);
  return std::max(flo, fhi);
}

}  // namespace

double RateModel::eval(double t) const {
  if (t < 0.0) return 0.0;
  switch (family_) {
    case RateFamily::Constant:
      return t >= a_ ? lambda0_ : 0.0;
    case RateFamily::Polynomial:
      return lambda0_ * std::pow(t, p_);
    case RateFamily::SinusoidalSin:
      return lambda0_ * (1.0 + b_ * std::sin(t));
    case RateFamily::SinusoidalCos:
      return lambda0_ * (1.0 + b_ * std::cos(t));
    case RateFamily::Exponential:
      return lambda0_ * std::exp(theta_ * t);
    case RateFamily::HighLow: {
      if (t == 0.0) return 0.0;  // support is (0, inf), intervals are left-open
      const double frac = t - 2.0 * std::floor(t / 2.0);
      return (frac > 0.0 && frac <= 1.0) ? lambda0_ : lambda1_;
    }
  }
  return 0.0;
}

std::complex<double> RateModel::laplace(std::complex<double> z) const {
  if (z.real() <= sigma_lambda_)
    throw std::domain_error("RateModel::laplace: Re(z) must exceed sigma_lambda = " +
                            std::to_string(sigma_lambda_));
  using cd = std::complex<double>;
  switch (family_) {
    case RateFamily::Constant:
      return lambda0_ * std::exp(-a_ * z) / z;
    case RateFamily::Polynomial:
      // Principal branch; Re(z) > 0 keeps us away from the cut.
      return lambda0_ * std::exp(std::lgamma(p_ + 1.0)) / std::pow(z, p_ + 1.0);
    case RateFamily::SinusoidalSin:
      return lambda0_ / z + lambda0_ * b_ / (z * z + 1.0);
    case RateFamily::SinusoidalCos:
      return lambda0_ / z + lambda0_ * b_ * z / (z * z + 1.0);
    case RateFamily::Exponential:
      return lambda0_ / (z - theta_);
    case RateFamily::HighLow: {
      const cd e = std::exp(-z);
      return (lambda0_ + lambda1_ * e) / (z * (1.0 + e));
    }
  }
  return {};
}

double RateModel::sup_bound(double t0, double t1) const {
  if (t1 < t0) std::swap(t0, t1);
  if (t1 <= 0.0) return 0.0;
  t0 = std::max(t0, 0.0);
  switch (family_) {
    case RateFamily::Constant:
      return t1 >= a_ ? lambda0_ : 0.0;
    case RateFamily::Polynomial:
      return lambda0_ * std::pow(t1, p_);
    case RateFamily::SinusoidalSin:
      return lambda0_ * (1.0 + b_ * max_trig(t0, t1, false));
    case RateFamily::SinusoidalCos:
      return lambda0_ * (1.0 + b_ * max_trig(t0, t1, true));
    case RateFamily::Exponential:
      return lambda0_ * std::exp(theta_ * t1);
    case RateFamily::HighLow:
      return std::max(lambda0_, lambda1_);
  }
  return 0.0;
}

std::vector<double> RateModel::jump_points(double lo, double hi) const {
  std::vector<double> pts;
  if (hi <= lo) return pts;
  auto push = [&](double x) {
    if (x > lo && x < hi) pts.push_back(x);
  };
  push(0.0);
  switch (family_) {
    case RateFamily::Constant:
      push(a_);
      break;
    case RateFamily::HighLow:
      for (double k = std::ceil(lo); k <= std::floor(hi); k += 1.0) push(k);
      break;
    default:
      break;
  }
  return pts;
}

RateModel make_constant(double lambda0, double a) {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("make_constant: lambda0 must be > 0");
  if (a < 0.0) throw std::invalid_argument("make_constant: a must be >= 0");
  RateModel m;
  m.family_ = RateFamily::Constant;
  m.lambda0_ = lambda0;
  m.a_ = a;
  m.sigma_lambda_ = 0.0;
  m.gamma_ = 1.0;
  m.k0_ = 1.0;
  m.growth_ = PolynomialGrowth{0.0, 0.0, 1.0};
  m.label_ = "constant";
  return m;
}

RateModel make_polynomial(double lambda0, double p) {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("make_polynomial: lambda0 must be > 0");
  if (p < 0.0) throw std::invalid_argument("make_polynomial: p must be >= 0");
  RateModel m;
  m.family_ = RateFamily::Polynomial;
  m.lambda0_ = lambda0;
  m.p_ = p;
  m.sigma_lambda_ = 0.0;
  m.gamma_ = p + 1.0;
  m.k0_ = std::exp(std::lgamma(p + 1.0));
  m.growth_ = PolynomialGrowth{p, 0.0, 1.0};
  m.label_ = "polynomial";
  return m;
}

RateModel make_sinusoidal(double lambda0, double b, bool cosine) {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("make_sinusoidal: lambda0 must be > 0");
  if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("make_sinusoidal: b must be in (0,1]");
  RateModel m;
  m.family_ = cosine ? RateFamily::SinusoidalCos : RateFamily::SinusoidalSin;
  m.lambda0_ = lambda0;
  m.b_ = b;
  m.sigma_lambda_ = 0.0;
  m.gamma_ = 1.0;
  // The sine transform obeys |lambda_hat| >= lambda0/|z| (k0 = 1). The cosine
  // transform lambda0(2z^2+1)/(z(z^2+1)) dips near its imaginary-axis zeros
  // z = +-i/sqrt(2); k0 = 0.25 holds on lines Re(z) >= 0.1 with a 2x margin
  // (checked by validate_assumptions on the default grids).
  m.k0_ = cosine ? 0.25 : 1.0;
  m.growth_ = PolynomialGrowth{0.0, 1.0, 1.0};
  m.label_ = cosine ? "sinusoidal-cos" : "sinusoidal-sin";
  return m;
}

RateModel make_exponential(double lambda0, double theta) {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("make_exponential: lambda0 must be > 0");
  if (!(theta > 0.0)) throw std::invalid_argument("make_exponential: theta must be > 0");
  RateModel m;
  m.family_ = RateFamily::Exponential;
  m.lambda0_ = lambda0;
  m.theta_ = theta;
  m.sigma_lambda_ = theta;
  m.gamma_ = 1.0;
  m.k0_ = 1.0;
  m.growth_ = ExponentialGrowth{};
  m.label_ = "exponential";
  return m;
}

RateModel make_highlow(double lambda0, double lambda1) {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("make_highlow: lambda0 must be > 0");
  if (lambda1 < 0.0) throw std::invalid_argument("make_highlow: lambda1 must be >= 0");
  RateModel m;
  m.family_ = RateFamily::HighLow;
  m.lambda0_ = lambda0;
  m.lambda1_ = lambda1;
  m.sigma_lambda_ = 0.0;
  m.gamma_ = 1.0;
  // |lambda_hat| = |lambda0 + lambda1 e^{-z}| / (|z| |1 + e^{-z}|) with
  // |1 + e^{-z}| < 2 for Re(z) > 0, so k0 = (1 - lambda1/lambda0)/2 when the
  // low rate is below the high one; the lambda1 == lambda0 case collapses to a
  // constant rate with k0 = 1.
  if (lambda1 == lambda0)
    m.k0_ = 1.0;
  else
    m.k0_ = std::max(1e-6, (lambda0 - lambda1) / (2.0 * lambda0));
  m.growth_ = PolynomialGrowth{0.0, 0.0, std::max(1.0, lambda1 / lambda0)};
  m.label_ = "highlow";
  return m;
}

RateModel RateModel::with_bound_constants(double gamma, double k0) const {
  if (!(gamma >= 0.0) || !(k0 > 0.0))
    throw std::invalid_argument("with_bound_constants: need gamma >= 0 and k0 > 0");
  RateModel copy = *this;
  copy.gamma_ = gamma;
  copy.k0_ = k0;
  return copy;
}

namespace {

double growth_bound(const RateModel& m, double t) {
  if (std::holds_alternative<ExponentialGrowth>(m.growth()))
    return m.lambda0() * std::exp(m.sigma_lambda() * t);
  const auto& g = std::get<PolynomialGrowth>(m.growth());
  return m.lambda0() * (g.a1 + g.a2 * std::pow(t, g.p));
}

}  // namespace

ValidationReport validate_assumptions(const RateModel& model,
                                      const std::vector<double>& sigma_grid,
                                      const std::vector<double>& omega_grid,
                                      const std::vector<double>& t_grid) {
  ValidationReport report;
  for (double t : t_grid) {
    if (t < 0.0) continue;
    const double bound = growth_bound(model, t);
    const double margin = bound - model.eval(t);
    ++report.points_checked;
    if (margin < -1e-9 * (1.0 + std::abs(bound)))
      report.violations.push_back({AssumptionViolation::Kind::Growth, 0.0, 0.0, t, margin});
  }
  for (double sigma : sigma_grid) {
    if (sigma <= model.sigma_lambda()) continue;
    for (double omega : omega_grid) {
      const double mod = std::abs(model.laplace({sigma, omega}));
      const double d2 =
          (sigma - model.sigma_lambda()) * (sigma - model.sigma_lambda()) + omega * omega;
      const double bound =
          model.lambda0() * model.k0() / std::pow(d2, 0.5 * model.gamma());
      const double margin = mod - bound;
      ++report.points_checked;
      if (margin < -1e-9 * (1.0 + bound))
        report.violations.push_back(
            {AssumptionViolation::Kind::TransformLowerBound, sigma, omega, 0.0, margin});
    }
  }
  return report;
}

ValidationReport validate_assumptions(const RateModel& model) {
  std::vector<double> sigma_grid, omega_grid, t_grid;
  for (int i = 1; i <= 50; ++i) sigma_grid.push_back(model.sigma_lambda() + 0.1 * i);
  for (int i = -200; i <= 200; ++i) omega_grid.push_back(0.5 * i);
  for (int i = 0; i <= 500; ++i) t_grid.push_back(0.1 * i);
  return validate_assumptions(model, sigma_grid, omega_grid, t_grid);
}

}  // namespace isq
